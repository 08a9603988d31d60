use std::fmt;

use serde::Serialize;

use crate::error::{Error, ParamViolation, Result};
use crate::field::{is_odd_prime, MAX_FIELD_ORDER};
use crate::poly::pow_mod;

/// Which closed-form table governs the code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Regime {
    /// `k` even and `e` odd: weights come from the sums `S(a,b)`.
    #[serde(rename = "KE_EVEN_E_ODD")]
    KEvenEOdd,
    /// `k/e` odd: weights come from the sums `T(a,b)`.
    #[serde(rename = "K_OVER_E_ODD")]
    KOverEOdd,
    /// `k/e` even with `e` even. No closed form; only reachable through
    /// [`validate_brute_force`].
    #[serde(rename = "UNSUPPORTED")]
    Unsupported,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Self::KEvenEOdd => "KE_EVEN_E_ODD",
            Self::KOverEOdd => "K_OVER_E_ODD",
            Self::Unsupported => "UNSUPPORTED",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Validated code parameters and their derived constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CodeSpec {
    pub p: u32,
    pub m: u32,
    pub k: u32,
    /// `gcd(m, k)`
    pub e: u32,
    /// `m / e`
    pub s: u32,
    /// `p^e`
    pub q: u32,
    /// Code length `p^m - 1`.
    pub n: u32,
    /// Code dimension `2m`.
    pub dim: u32,
    pub regime: Regime,
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn check_frame(p: u32, m: u32, k: u32) -> Result<(u32, u32)> {
    let invalid = |v| Err(Error::InvalidParams(v));
    if !is_odd_prime(p as u64) {
        return invalid(ParamViolation::NotOddPrime { p: p as u64 });
    }
    if m == 0 || k == 0 {
        return invalid(ParamViolation::ZeroDegree);
    }
    let e = gcd(m, k);
    let s = m / e;
    if s.is_multiple_of(2) {
        return invalid(ParamViolation::EvenRelativeDegree { s });
    }
    if s < 3 {
        return invalid(ParamViolation::RelativeDegreeTooSmall { s });
    }
    match (p as u64).checked_pow(m) {
        Some(order) if order <= MAX_FIELD_ORDER => Ok((e, s)),
        _ => invalid(ParamViolation::FieldTooLarge {
            p: p as u64,
            m,
            limit: MAX_FIELD_ORDER,
        }),
    }
}

fn build(p: u32, m: u32, k: u32, e: u32, s: u32, regime: Regime) -> CodeSpec {
    let n = p.pow(m) - 1;
    CodeSpec {
        p,
        m,
        k,
        e,
        s,
        q: p.pow(e),
        n,
        dim: 2 * m,
        regime,
    }
}

/// Validate `(p, m, k)` and classify the regime.
pub fn validate(p: u32, m: u32, k: u32) -> Result<CodeSpec> {
    let (e, s) = check_frame(p, m, k)?;
    let k_over_e = k / e;
    let regime = if k_over_e % 2 == 1 {
        Regime::KOverEOdd
    } else if e % 2 == 1 {
        // k/e even and e odd force k even
        Regime::KEvenEOdd
    } else {
        return Err(Error::UnsupportedRegime { k_over_e, e });
    };
    Ok(build(p, m, k, e, s, regime))
}

/// Like [`validate`] but admits the regime without a closed-form table,
/// for brute-force-only analysis.
pub fn validate_brute_force(p: u32, m: u32, k: u32) -> Result<CodeSpec> {
    match validate(p, m, k) {
        Err(Error::UnsupportedRegime { .. }) => {
            let (e, s) = check_frame(p, m, k)?;
            Ok(build(p, m, k, e, s, Regime::Unsupported))
        }
        other => other,
    }
}

impl CodeSpec {
    /// `p^m`
    pub fn field_order(&self) -> u64 {
        self.n as u64 + 1
    }

    /// `u = (p^k + 1) / 2` as an exact integer when it fits.
    pub fn u(&self) -> Option<u64> {
        (self.p as u64).checked_pow(self.k).map(|pk| pk.div_ceil(2))
    }

    /// `u mod n`, usable as an exponent of `pi` for any `k`.
    pub fn u_mod_n(&self) -> u64 {
        let two_n = 2 * self.n as u64;
        let pk = pow_mod(self.p as u64, self.k as u64, two_n);
        pk.div_ceil(2) % self.n as u64
    }

    /// `p^k mod n`, the exponent of the Frobenius twist.
    pub fn pk_mod_n(&self) -> u64 {
        pow_mod(self.p as u64, self.k as u64, self.n as u64)
    }

    /// Number of coefficient pairs `(a, b)`: `p^{2m}`.
    pub fn pair_count(&self) -> u64 {
        self.field_order() * self.field_order()
    }

    /// `(p^m - p^{m-1})`, the middle weight.
    pub fn middle_weight(&self) -> u64 {
        let pm = self.field_order();
        pm - pm / self.p as u64
    }
}
