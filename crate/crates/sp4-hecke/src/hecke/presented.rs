//! The algebra on two generators subject only to quadratic relations `t² = c₀ + c₁ t`,
//! with basis the alternating words.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::affine::Case;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Relation {
    pub c0: Complex64,
    pub c1: Complex64,
}

impl Relation {
    pub fn new(c0: f64, c1: f64) -> Self {
        Relation {
            c0: Complex64::new(c0, 0.0),
            c1: Complex64::new(c1, 0.0),
        }
    }

    /// `t² = q + (q - 1) t`.
    pub fn iwahori(q: f64) -> Self {
        Self::new(q, q - 1.0)
    }

    /// `t² = 1`.
    pub fn involution() -> Self {
        Self::new(1.0, 0.0)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct AbstractHeckeElement {
    pub terms: BTreeMap<Vec<usize>, Complex64>,
}

impl AbstractHeckeElement {
    pub fn word(w: &[usize]) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(w.to_vec(), Complex64::new(1.0, 0.0));
        AbstractHeckeElement { terms }
    }

    pub fn coefficient(&self, w: &[usize]) -> Complex64 {
        self.terms.get(w).copied().unwrap_or_default()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PresentedAlgebra {
    pub case: Case,
    pub relations: [Relation; 2],
}

/// Alternating words of at most `len` letters, shortest first.
pub fn reduced_words(len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for l in 1..=len {
        for first in 0..2 {
            out.push((0..l).map(|i| (first + i) % 2).collect());
        }
    }
    out
}

impl PresentedAlgebra {
    /// The Iwahori–Hecke algebra of `SL(2)` (first case) or `PGL(2)` (second case, letters
    /// `t_α, t_n`).
    pub fn iwahori(case: Case, q: f64) -> Self {
        let relations = match case {
            Case::Sl2Gl1 => [Relation::iwahori(q), Relation::iwahori(q)],
            Case::Gl2 => [Relation::involution(), Relation::iwahori(q)],
        };
        PresentedAlgebra { case, relations }
    }

    fn add_word_product(
        &self,
        u: &[usize],
        v: &[usize],
        c: Complex64,
        out: &mut BTreeMap<Vec<usize>, Complex64>,
    ) {
        match (u.last(), v.first()) {
            (Some(&a), Some(&b)) if a == b => {
                // t_u' t_s t_s t_v' = c₀ t_u' t_v' + c₁ t_u t_v'
                let r = self.relations[a];
                let (u1, v1) = (&u[..u.len() - 1], &v[1..]);
                self.add_word_product(u1, v1, c * r.c0, out);
                let mut w = u.to_vec();
                w.extend_from_slice(v1);
                *out.entry(w).or_default() += c * r.c1;
            }
            _ => {
                let mut w = u.to_vec();
                w.extend_from_slice(v);
                *out.entry(w).or_default() += c;
            }
        }
    }

    pub fn multiply(
        &self,
        x: &AbstractHeckeElement,
        y: &AbstractHeckeElement,
    ) -> AbstractHeckeElement {
        let mut terms = BTreeMap::new();
        for (u, a) in &x.terms {
            for (v, b) in &y.terms {
                self.add_word_product(u, v, a * b, &mut terms);
            }
        }
        terms.retain(|_, c: &mut Complex64| c.norm() > 1e-12);
        AbstractHeckeElement { terms }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn quadratic_relations() {
        let a = PresentedAlgebra::iwahori(Case::Sl2Gl1, 3.0);
        let t = AbstractHeckeElement::word(&[0]);
        let tt = a.multiply(&t, &t);
        assert_eq!(tt.coefficient(&[]), Complex64::new(3.0, 0.0));
        assert_eq!(tt.coefficient(&[0]), Complex64::new(2.0, 0.0));
        let b = PresentedAlgebra::iwahori(Case::Gl2, 3.0);
        let s = AbstractHeckeElement::word(&[0]);
        assert_eq!(b.multiply(&s, &s), AbstractHeckeElement::word(&[]));
    }

    #[test]
    fn reduced_product_is_concatenation() {
        let a = PresentedAlgebra::iwahori(Case::Sl2Gl1, 5.0);
        let x = a.multiply(
            &AbstractHeckeElement::word(&[0]),
            &AbstractHeckeElement::word(&[1]),
        );
        assert_eq!(x, AbstractHeckeElement::word(&[0, 1]));
        assert_eq!(reduced_words(2).len(), 5);
    }

    proptest! {
        #[test]
        fn associative(u in 0usize..9, v in 0usize..9, w in 0usize..9, q in 2u32..8) {
            let words = reduced_words(4);
            let a = PresentedAlgebra::iwahori(Case::Sl2Gl1, q as f64);
            let (x, y, z) = (
                AbstractHeckeElement::word(&words[u]),
                AbstractHeckeElement::word(&words[v]),
                AbstractHeckeElement::word(&words[w]),
            );
            let l = a.multiply(&a.multiply(&x, &y), &z);
            let r = a.multiply(&x, &a.multiply(&y, &z));
            for k in l.terms.keys().chain(r.terms.keys()) {
                prop_assert!((l.coefficient(k) - r.coefficient(k)).norm() < 1e-9);
            }
        }
    }
}
