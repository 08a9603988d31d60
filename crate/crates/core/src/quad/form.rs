//! The quadratic forms `Q_{a,b}(x) = Tr_{q^s/q}(a x^2 + b x^{p^k+1})`.

use std::cell::OnceCell;

use crate::error::{Error, Result};
use crate::field::{FieldElem, FieldTower};
use crate::quad::cycint::CycInt;
use crate::quad::gfq::{Diagonal, Gq, SmallField, SymMatrix};

/// Everything shared by the family `{Q_{a,b}}` for a fixed tower and `k`:
/// the GF(q) tables, the basis `{1, π, …, π^{s-1}}` of GF(q^s) over GF(q),
/// and precomputed polarization constants.
pub struct FormSpace<'t> {
    tower: &'t FieldTower,
    k: u32,
    gq: SmallField,
    /// `p^k mod n`
    pk: u64,
    /// `p^k + 1 mod n`
    twist: u64,
    /// `Tr_{q^s/q}` of `pi^i`, as a GF(q) element, indexed by `i`.
    trsub: Vec<Gq>,
    /// logs of `2 β_i β_j`, row-major `s × s`
    w2: Vec<u32>,
    /// logs of `β_i β_j^{p^k} + β_i^{p^k} β_j` (`None` when zero)
    wd: Vec<Option<u32>>,
    half: Gq,
}

impl<'t> FormSpace<'t> {
    pub fn new(tower: &'t FieldTower, k: u32) -> Self {
        let n = tower.n() as u64;
        let pk = crate::poly::pow_mod(tower.p() as u64, k as u64, n);
        let twist = (pk + 1) % n;
        let gq = SmallField::new(tower);
        let trsub = (0..tower.n())
            .map(|i| gq.from_big(tower, tower.trace_to_subfield(tower.pi_pow(i as u64))))
            .collect();
        let s = tower.s() as usize;
        let basis: Vec<FieldElem> = (0..s).map(|i| tower.pi_pow(i as u64)).collect();
        let two = tower.from_prime(2);
        let mut w2 = Vec::with_capacity(s * s);
        let mut wd = Vec::with_capacity(s * s);
        for &bi in &basis {
            for &bj in &basis {
                let prod = tower.mul(two, tower.mul(bi, bj));
                w2.push(tower.log(prod).expect("basis products are nonzero"));
                let cross = tower.add(
                    tower.mul(bi, tower.pow(bj, pk)),
                    tower.mul(tower.pow(bi, pk), bj),
                );
                wd.push(tower.log(cross));
            }
        }
        let half = gq.half();
        Self {
            tower,
            k,
            gq,
            pk,
            twist,
            trsub,
            w2,
            wd,
            half,
        }
    }

    pub fn tower(&self) -> &'t FieldTower {
        self.tower
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn small_field(&self) -> &SmallField {
        &self.gq
    }

    /// `p^k + 1 mod n`, the exponent of the second monomial.
    pub fn twist_exponent(&self) -> u64 {
        self.twist
    }

    pub fn form(&self, a: FieldElem, b: FieldElem) -> QuadForm<'_, 't> {
        QuadForm {
            space: self,
            a,
            b,
            rank: OnceCell::new(),
        }
    }

    /// `Q_{a,b}(x)` as an element of GF(q) ⊂ GF(q^s).
    pub fn evaluate(&self, a: FieldElem, b: FieldElem, x: FieldElem) -> FieldElem {
        let t = self.tower;
        let inner = t.add(t.mul(a, t.mul(x, x)), t.mul(b, t.pow(x, self.twist)));
        t.trace_to_subfield(inner)
    }

    #[inline]
    fn trsub_log(&self, log: Option<u32>) -> Gq {
        match log {
            None => 0,
            Some(l) => self.trsub[l as usize],
        }
    }

    /// Fill `out` with the symmetric matrix of `Q_{a,b}` from the logs of
    /// `a` and `b`. Entry `(i,j)` is `½ B(β_i, β_j)` with the polarization
    /// `B(x,z) = Tr(2a xz + b(x z^{p^k} + x^{p^k} z))`.
    pub(crate) fn fill_matrix(&self, la: Option<u32>, lb: Option<u32>, out: &mut SymMatrix) {
        let s = out.size;
        let t = self.tower;
        let n = t.n();
        let exp = t.exp_table();
        let log = t.log_table();
        let mul_log = |x: Option<u32>, y: Option<u32>| -> Option<u32> {
            match (x, y) {
                (Some(x), Some(y)) => {
                    let l = x + y;
                    Some(if l >= n { l - n } else { l })
                }
                _ => None,
            }
        };
        for i in 0..s {
            for j in i..s {
                let idx = i * s + j;
                let ta = mul_log(la, Some(self.w2[idx]));
                let tb = mul_log(lb, self.wd[idx]);
                let sum = match (ta, tb) {
                    (None, None) => None,
                    (Some(x), None) | (None, Some(x)) => Some(x),
                    (Some(x), Some(y)) => {
                        let v = t.add(
                            FieldElem::from_raw(exp[x as usize]),
                            FieldElem::from_raw(exp[y as usize]),
                        );
                        let l = log[v.index() as usize];
                        (l != u32::MAX).then_some(l)
                    }
                };
                let v = self.gq.mul(self.half, self.trsub_log(sum));
                out.set(i, j, v);
                out.set(j, i, v);
            }
        }
    }
}

/// One quadratic form of the family, with its rank cached once computed.
pub struct QuadForm<'s, 't> {
    space: &'s FormSpace<'t>,
    pub a: FieldElem,
    pub b: FieldElem,
    rank: OnceCell<u32>,
}

impl<'s, 't> QuadForm<'s, 't> {
    pub fn space(&self) -> &'s FormSpace<'t> {
        self.space
    }

    pub fn eval(&self, x: FieldElem) -> FieldElem {
        self.space.evaluate(self.a, self.b, x)
    }

    /// Rank `s - dim_{GF(q)} V`, where the radical `V` is the kernel of the
    /// linearized map `L(x) = b^{p^k} x^{p^{2k}} + 2 a^{p^k} x^{p^k} + b x`.
    ///
    /// `L` is GF(q)-linear; its kernel is found by Gaussian elimination over
    /// GF(p) on the polynomial basis and the GF(p)-dimension divided by `e`.
    pub fn radical_rank(&self) -> u32 {
        *self.rank.get_or_init(|| {
            let t = self.space.tower;
            let (p, m, e) = (t.p(), t.m() as usize, t.e());
            let pk = self.space.pk;
            let b_pk = t.pow(self.b, pk);
            let two_a_pk = t.mul(t.from_prime(2), t.pow(self.a, pk));
            let rows: Vec<Vec<u32>> = (0..m)
                .map(|j| {
                    let x = t.pi_pow(j as u64);
                    let x_pk = t.pow(x, pk);
                    let x_p2k = t.pow(x_pk, pk);
                    let lx = t.add(
                        t.add(t.mul(b_pk, x_p2k), t.mul(two_a_pk, x_pk)),
                        t.mul(self.b, x),
                    );
                    t.coeffs(lx)
                })
                .collect();
            let rank_p = rank_mod_p(rows, p);
            let kernel_dim_p = m as u32 - rank_p;
            assert_eq!(kernel_dim_p % e, 0, "radical is not a GF(q)-subspace");
            t.s() - kernel_dim_p / e
        })
    }

    /// Symmetric matrix in the basis `β_i = π^i`, by the definition
    /// `A_ii = Q(β_i)`, `A_ij = (Q(β_i+β_j) - Q(β_i) - Q(β_j)) / 2`.
    pub fn symmetric_matrix(&self) -> SymMatrix {
        let t = self.space.tower;
        let gq = &self.space.gq;
        let s = t.s() as usize;
        let basis: Vec<FieldElem> = (0..s).map(|i| t.pi_pow(i as u64)).collect();
        let q_small = |x: FieldElem| gq.from_big(t, self.eval(x));
        let mut out = SymMatrix::zeros(s);
        for i in 0..s {
            out.set(i, i, q_small(basis[i]));
        }
        for i in 0..s {
            for j in i + 1..s {
                let polar = gq.sub(
                    gq.sub(q_small(t.add(basis[i], basis[j])), out.get(i, i)),
                    out.get(j, j),
                );
                let v = gq.mul(self.space.half, polar);
                out.set(i, j, v);
                out.set(j, i, v);
            }
        }
        out
    }

    /// Symmetric matrix through the precomputed polarization constants;
    /// equal to [`Self::symmetric_matrix`].
    pub fn fast_matrix(&self) -> SymMatrix {
        let t = self.space.tower;
        let mut out = SymMatrix::zeros(t.s() as usize);
        self.space
            .fill_matrix(t.log(self.a), t.log(self.b), &mut out);
        out
    }

    pub fn diagonal(&self) -> Diagonal {
        self.fast_matrix().diagonalize(&self.space.gq)
    }

    /// `Σ_{x ∈ GF(q^s)} ζ_p^{Tr_{q/p}(Q(x))}`, by direct counting and by the
    /// closed form from the rank and discriminant; the two must agree.
    pub fn gauss_sum(&self) -> Result<CycInt> {
        let direct = self.gauss_sum_direct();
        let closed = self.gauss_sum_closed();
        if direct != closed {
            return Err(Error::OracleMismatch(format!(
                "gauss sum of Q_(a={:?}, b={:?}): direct {direct:?} vs closed form {closed:?}",
                self.a, self.b
            )));
        }
        Ok(direct)
    }

    /// Bin `Tr_{q^s/p}(a x^2 + b x^{p^k+1})` over all `x`.
    pub fn gauss_sum_direct(&self) -> CycInt {
        let t = self.space.tower;
        let mut counts = vec![0i64; t.p() as usize];
        for x in t.elements() {
            let inner = t.add(
                t.mul(self.a, t.mul(x, x)),
                t.mul(self.b, t.pow(x, self.space.twist)),
            );
            counts[t.trace_to_prime(inner) as usize] += 1;
        }
        CycInt::from_counts(counts)
    }

    /// `η(Δ) q^{s-r} G_q^r`, where `G_q = (-1)^{e-1} G_p^e` is the quadratic
    /// Gauss sum of GF(q) obtained from that of GF(p) by Davenport–Hasse.
    pub fn gauss_sum_closed(&self) -> CycInt {
        let t = self.space.tower;
        let diag = self.diagonal();
        let r = diag.rank;
        let g_q = quadratic_gauss_sum_middle(t);
        let scale = (t.q() as i64).pow(t.s() - r) * diag.eta_delta(&self.space.gq) as i64;
        g_q.pow(r).scale(scale)
    }
}

/// `G_p = Σ_{z ∈ GF(p)} ζ^{z^2}`.
pub fn quadratic_gauss_sum_prime(p: u32) -> CycInt {
    let mut counts = vec![0i64; p as usize];
    for z in 0..p as u64 {
        counts[(z * z % p as u64) as usize] += 1;
    }
    CycInt::from_counts(counts)
}

/// `G_q = Σ_{z ∈ GF(q)} ζ^{Tr_{q/p}(z^2)} = (-1)^{e-1} G_p^e`.
pub fn quadratic_gauss_sum_middle(t: &FieldTower) -> CycInt {
    let g = quadratic_gauss_sum_prime(t.p()).pow(t.e());
    if t.e().is_multiple_of(2) {
        -&g
    } else {
        g
    }
}

fn rank_mod_p(mut rows: Vec<Vec<u32>>, p: u32) -> u32 {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0usize;
    let p64 = p as u64;
    for col in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(piv, rank);
        let inv = crate::poly::inv_mod(rows[rank][col], p) as u64;
        for r in 0..rows.len() {
            if r == rank || rows[r][col] == 0 {
                continue;
            }
            let f = rows[r][col] as u64 * inv % p64;
            for c in col..ncols {
                let v = (rows[r][c] as u64 + (p64 - f) * rows[rank][c] as u64) % p64;
                rows[r][c] = v as u32;
            }
        }
        rank += 1;
    }
    rank as u32
}
