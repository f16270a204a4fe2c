//! Canonical Hermite forms of `Z_p`-lattices in `Q_p^4`, used as coset fingerprints.

use num_traits::Zero;

use crate::chevalley::GroupElement;
use crate::scalar::{Prime, Scalar};

pub type Vector = [Scalar; 4];

/// Canonical basis `b_0..b_3` of the lattice spanned by `cols`: `b_i` vanishes above row
/// `i`, has `p^{v_i}` in row `i`, and row `j > i` reduced modulo `p^{v_j}`.
/// `None` when the columns do not span a full-rank lattice.
pub fn hermite_form(p: &Prime, cols: &[Vector]) -> Option<[Vector; 4]> {
    let mut cols: Vec<Vector> = cols.to_vec();
    let mut basis: Vec<Vector> = Vec::with_capacity(4);
    let mut vals = [0i64; 4];
    for row in 0..4 {
        let (idx, v) = cols
            .iter()
            .enumerate()
            .filter_map(|(i, c)| p.valuation(&c[row]).map(|v| (i, v)))
            .min_by_key(|&(_, v)| v)?;
        let mut c = cols.swap_remove(idx);
        let scale = p.pow(v) / &c[row];
        for x in c.iter_mut().skip(row) {
            *x *= &scale;
        }
        for other in cols.iter_mut() {
            if other[row].is_zero() {
                continue;
            }
            let f = &other[row] / &c[row];
            for r in row..4 {
                if !c[r].is_zero() {
                    let t = &f * &c[r];
                    other[r] -= t;
                }
            }
        }
        vals[row] = v;
        basis.push(c);
    }
    for i in 0..4 {
        for j in i + 1..4 {
            let x = basis[i][j].clone();
            let r = p.canonical_mod(&x, vals[j]);
            if r != x {
                let f = (x - &r) / p.pow(vals[j]);
                let bj = basis[j].clone();
                for k in j..4 {
                    if !bj[k].is_zero() {
                        let t = &f * &bj[k];
                        basis[i][k] -= t;
                    }
                }
            }
        }
    }
    Some([
        basis[0].clone(),
        basis[1].clone(),
        basis[2].clone(),
        basis[3].clone(),
    ])
}

/// Whether `v` lies in the lattice with Hermite basis `b`.
pub fn lattice_contains(p: &Prime, b: &[Vector; 4], v: &Vector) -> bool {
    let mut rest = v.clone();
    for i in 0..4 {
        if rest[i].is_zero() {
            continue;
        }
        let c = &rest[i] / &b[i][i];
        if !p.val_at_least(&c, 0) {
            return false;
        }
        for k in i..4 {
            if !b[i][k].is_zero() {
                let t = &c * &b[i][k];
                rest[k] -= t;
            }
        }
    }
    true
}

pub fn apply(g: &GroupElement, v: &Vector) -> Vector {
    let mut out: Vector = Default::default();
    for (i, o) in out.iter_mut().enumerate() {
        for (j, x) in v.iter().enumerate() {
            if !x.is_zero() && !g.entry(i, j).is_zero() {
                *o += g.entry(i, j) * x;
            }
        }
    }
    out
}

/// Arithmetic in `Z / p^e`.
#[derive(Debug, Clone, Copy)]
pub struct ModRing {
    pub p: u64,
    pub e: u32,
    pub m: u64,
}

impl ModRing {
    pub fn new(p: u64, e: u32) -> Self {
        let m = p.checked_pow(e).expect("modulus fits in u64");
        ModRing { p, e, m }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.m as u128) as u64
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.m - b) % self.m
    }

    /// Valuation, `e` for zero.
    pub fn val(&self, mut x: u64) -> u32 {
        if x == 0 {
            return self.e;
        }
        let mut v = 0;
        while x.is_multiple_of(self.p) {
            x /= self.p;
            v += 1;
        }
        v
    }

    pub fn inv_unit(&self, u: u64) -> u64 {
        let (mut a, mut b) = (u as i128, self.m as i128);
        let (mut x0, mut x1) = (1i128, 0i128);
        while b != 0 {
            let q = a / b;
            (a, b) = (b, a - q * b);
            (x0, x1) = (x1, x0 - q * x1);
        }
        debug_assert_eq!(a, 1);
        x0.rem_euclid(self.m as i128) as u64
    }
}

/// Canonical Hermite basis of a submodule of `(Z / p^e)^4` given by generators; a row
/// with no pivot gets the zero vector and valuation `e`. Flattened into `out`.
pub fn hermite_form_mod(r: &ModRing, cols: &mut Vec<[u64; 4]>, out: &mut Vec<u64>) {
    let mut basis = [[0u64; 4]; 4];
    let mut vals = [r.e; 4];
    for row in 0..4 {
        let Some((idx, v)) = cols
            .iter()
            .enumerate()
            .map(|(i, c)| (i, r.val(c[row])))
            .filter(|&(_, v)| v < r.e)
            .min_by_key(|&(_, v)| v)
        else {
            continue;
        };
        let mut c = cols.swap_remove(idx);
        let pv = r.p.pow(v);
        let inv = r.inv_unit(c[row] / pv);
        for x in c.iter_mut().skip(row) {
            *x = r.mul(*x, inv);
        }
        for other in cols.iter_mut() {
            if other[row] == 0 {
                continue;
            }
            let f = other[row] / pv;
            for k in row..4 {
                other[k] = r.sub(other[k], r.mul(f, c[k]));
            }
        }
        // p^{e-v} c vanishes in this row but not necessarily below it
        let t = r.p.pow(r.e - v);
        let mut tail = [0u64; 4];
        for k in row + 1..4 {
            tail[k] = r.mul(t, c[k]);
        }
        if tail.iter().any(|&x| x != 0) {
            cols.push(tail);
        }
        vals[row] = v;
        basis[row] = c;
    }
    for i in 0..4 {
        for j in i + 1..4 {
            if vals[j] >= r.e {
                continue;
            }
            let pj = r.p.pow(vals[j]);
            let x = basis[i][j];
            let f = x / pj;
            if f != 0 {
                let bj = basis[j];
                for k in j..4 {
                    basis[i][k] = r.sub(basis[i][k], r.mul(f, bj[k]));
                }
            }
        }
    }
    for (i, b) in basis.iter().enumerate() {
        out.push(vals[i] as u64);
        out.extend_from_slice(&b[i..]);
    }
}
