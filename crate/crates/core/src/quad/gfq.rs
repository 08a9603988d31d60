//! GF(q) as a small table-driven field, and symmetric matrices over it.
//!
//! Element `0` is zero and element `i + 1` is `γ^i` for the tower's
//! subfield generator `γ`. Since `γ` is a nonsquare, the quadratic character
//! of `γ^i` is `(-1)^i`.

use crate::field::{FieldElem, FieldTower};

pub type Gq = u8;

#[derive(Debug, Clone)]
pub struct SmallField {
    q: usize,
    add: Vec<Gq>,
    neg: Vec<Gq>,
    /// log step from GF(q)* logs to GF(p^m)* logs
    step: u32,
}

impl SmallField {
    pub fn new(tower: &FieldTower) -> Self {
        let q = tower.q() as usize;
        assert!(q <= 256, "GF(q) too large for byte indices");
        let step = tower.subfield_log_step();
        let to_big = |i: usize| -> FieldElem {
            if i == 0 {
                tower.zero()
            } else {
                tower.pi_pow((i as u64 - 1) * step as u64)
            }
        };
        let from_big = |x: FieldElem| -> Gq {
            match tower.log(x) {
                None => 0,
                Some(l) => {
                    debug_assert_eq!(l % step, 0);
                    (l / step + 1) as Gq
                }
            }
        };
        let mut add = vec![0; q * q];
        for i in 0..q {
            for j in 0..q {
                add[i * q + j] = from_big(tower.add(to_big(i), to_big(j)));
            }
        }
        let neg = (0..q).map(|i| from_big(tower.neg(to_big(i)))).collect();
        Self { q, add, neg, step }
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Map an element of GF(q) ⊂ GF(p^m) given by its big-field log.
    #[inline]
    pub fn from_big_log(&self, log: Option<u32>) -> Gq {
        match log {
            None => 0,
            Some(l) => (l / self.step + 1) as Gq,
        }
    }

    pub fn from_big(&self, tower: &FieldTower, x: FieldElem) -> Gq {
        let l = tower.log(x);
        if let Some(l) = l {
            assert_eq!(l % self.step, 0, "element is not in GF(q)");
        }
        self.from_big_log(l)
    }

    pub fn to_big(&self, tower: &FieldTower, x: Gq) -> FieldElem {
        if x == 0 {
            tower.zero()
        } else {
            tower.pi_pow((x as u64 - 1) * self.step as u64)
        }
    }

    #[inline]
    pub fn add(&self, x: Gq, y: Gq) -> Gq {
        self.add[x as usize * self.q + y as usize]
    }

    #[inline]
    pub fn neg(&self, x: Gq) -> Gq {
        self.neg[x as usize]
    }

    #[inline]
    pub fn sub(&self, x: Gq, y: Gq) -> Gq {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: Gq, y: Gq) -> Gq {
        if x == 0 || y == 0 {
            return 0;
        }
        let l = (x as usize - 1 + y as usize - 1) % (self.q - 1);
        (l + 1) as Gq
    }

    #[inline]
    pub fn inv(&self, x: Gq) -> Gq {
        assert!(x != 0, "inverse of zero");
        let l = (self.q - 1 - (x as usize - 1)) % (self.q - 1);
        (l + 1) as Gq
    }

    pub fn one(&self) -> Gq {
        1
    }

    pub fn half(&self) -> Gq {
        self.inv(self.add(1, 1))
    }

    /// Quadratic character of GF(q).
    #[inline]
    pub fn eta(&self, x: Gq) -> i8 {
        match x {
            0 => 0,
            x if (x - 1) % 2 == 0 => 1,
            _ => -1,
        }
    }

    /// `-1` as an element, for sign bookkeeping.
    pub fn minus_one(&self) -> Gq {
        self.neg(1)
    }

    /// Multiplicative order bookkeeping helper: `x^k`.
    pub fn pow(&self, x: Gq, k: u64) -> Gq {
        if k == 0 {
            return 1;
        }
        if x == 0 {
            return 0;
        }
        let l = ((x as u64 - 1) * k) % (self.q as u64 - 1);
        (l + 1) as Gq
    }
}

/// Square matrix over GF(q), row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymMatrix {
    pub size: usize,
    pub entries: Vec<Gq>,
}

/// Result of a congruence diagonalization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagonal {
    /// The nonzero diagonal entries `d_1 … d_r`.
    pub entries: Vec<Gq>,
    pub rank: u32,
}

impl Diagonal {
    /// `η(Δ)` with `Δ = d_1 ⋯ d_r`, and `Δ = 1` for rank zero.
    pub fn eta_delta(&self, field: &SmallField) -> i8 {
        let delta = self.entries.iter().fold(1, |acc, &d| field.mul(acc, d));
        field.eta(delta)
    }
}

impl SymMatrix {
    pub fn zeros(size: usize) -> Self {
        Self {
            size,
            entries: vec![0; size * size],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size);
        for i in 0..size {
            m.set(i, i, 1);
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Gq {
        self.entries[i * self.size + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Gq) {
        self.entries[i * self.size + j] = v;
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.size).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// `P A P^T` for the permutation sending index `i` to `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut out = Self::zeros(self.size);
        for i in 0..self.size {
            for j in 0..self.size {
                out.set(perm[i], perm[j], self.get(i, j));
            }
        }
        out
    }

    /// Row-reduction rank.
    pub fn rank(&self, field: &SmallField) -> u32 {
        let mut a = self.entries.clone();
        let n = self.size;
        let mut rank = 0;
        for col in 0..n {
            let Some(piv) = (rank..n).find(|&r| a[r * n + col] != 0) else {
                continue;
            };
            for c in 0..n {
                a.swap(piv * n + c, rank * n + c);
            }
            let inv = field.inv(a[rank * n + col]);
            for r in 0..n {
                if r == rank || a[r * n + col] == 0 {
                    continue;
                }
                let f = field.mul(a[r * n + col], inv);
                for c in col..n {
                    let v = field.mul(f, a[rank * n + c]);
                    a[r * n + c] = field.sub(a[r * n + c], v);
                }
            }
            rank += 1;
        }
        rank as u32
    }

    /// Congruence diagonalization `T A T^T` by symmetric row and column
    /// elimination. A zero diagonal blocking the pivot is repaired by adding
    /// row/column `l` to row/column `j` where `A_jl != 0`, which turns `A_jj`
    /// into `2 A_jl != 0` (odd characteristic).
    pub fn diagonalize(&self, field: &SmallField) -> Diagonal {
        let mut a = self.clone();
        let n = self.size;
        let mut entries = Vec::new();
        for i in 0..n {
            if a.get(i, i) == 0 {
                if let Some(j) = (i + 1..n).find(|&j| a.get(j, j) != 0) {
                    a.swap_index(i, j);
                } else if let Some((j, l)) = (i..n)
                    .flat_map(|j| (j + 1..n).map(move |l| (j, l)))
                    .find(|&(j, l)| a.get(j, l) != 0)
                {
                    a.add_index(j, l, 1, field);
                    a.swap_index(i, j);
                } else {
                    break;
                }
            }
            let pivot = a.get(i, i);
            debug_assert_ne!(pivot, 0);
            let inv = field.inv(pivot);
            for t in i + 1..n {
                let f = field.mul(a.get(t, i), inv);
                if f != 0 {
                    a.add_index(t, i, field.neg(f), field);
                }
            }
            entries.push(pivot);
        }
        Diagonal {
            rank: entries.len() as u32,
            entries,
        }
    }

    fn swap_index(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        let n = self.size;
        for c in 0..n {
            self.entries.swap(i * n + c, j * n + c);
        }
        for r in 0..n {
            self.entries.swap(r * n + i, r * n + j);
        }
    }

    /// row_t += f·row_src, then col_t += f·col_src.
    fn add_index(&mut self, t: usize, src: usize, f: Gq, field: &SmallField) {
        let n = self.size;
        for c in 0..n {
            let v = field.add(self.get(t, c), field.mul(f, self.get(src, c)));
            self.set(t, c, v);
        }
        for r in 0..n {
            let v = field.add(self.get(r, t), field.mul(f, self.get(r, src)));
            self.set(r, t, v);
        }
    }
}
