//! The map `t_w ↦ e_{w₁} * ... * e_{w_k}` from the presented algebra into `H(K, χ)`.

use std::collections::HashMap;

use num_complex::Complex64;
use num_traits::Zero;

use super::algebra::{HeckeAlgebra, HeckeElement};
use super::gauss::{g_delta, g_one_minus_delta};
use super::presented::{reduced_words, AbstractHeckeElement, PresentedAlgebra, Relation};
use super::words::{word_gallery_length, word_name};
use crate::affine::{Case, ALPHA, BETA, DELTA};
use crate::Error;

/// `G_δ, G_{1-δ}` or `1, q`: the scalars dividing `f` to give the normalized generators.
pub fn normalizations(alg: &HeckeAlgebra) -> Result<[Complex64; 2], Error> {
    let s = alg.setting();
    Ok(match s.case() {
        Case::Sl2Gl1 => [g_delta(s.sp(), &s.chi)?, g_one_minus_delta(s.sp(), &s.chi)?],
        Case::Gl2 => [Complex64::new(1.0, 0.0), Complex64::new(alg.q(), 0.0)],
    })
}

/// Closed forms of `f² = c₀ 1_χ + c₁ f` for the two generators:
/// `μ(h_δ(-1)) q² + (q-1) G f` (no linear term when `μ` is trivial on `T_δ`),
/// `μ(h_α(-1))`, and `μ(h_{1-β}(-1) h_δ(-1)) q³` or `q³ + q(q-1) f_n` for trivial `μ`.
pub fn square_formulas(alg: &HeckeAlgebra) -> Result<[Relation; 2], Error> {
    let s = alg.setting();
    let sp = s.sp();
    let q = alg.q();
    let m1 = crate::scalar::int(-1);
    let one = Complex64::new(1.0, 0.0);
    let trivial = s.chi.mu().is_trivial_on_units(sp.prime());
    let rel = |c0: Complex64, c1: Complex64| Relation { c0, c1 };
    Ok(match s.case() {
        Case::Sl2Gl1 => {
            let sign = s.chi.mu_torus(&sp.h(DELTA, &m1))?;
            let g = normalizations(alg)?;
            let lin = |g: Complex64| {
                if trivial {
                    Complex64::zero()
                } else {
                    g * (q - 1.0)
                }
            };
            [rel(sign * q * q, lin(g[0])), rel(sign * q * q, lin(g[1]))]
        }
        Case::Gl2 => {
            let sa = s.chi.mu_torus(&sp.h(ALPHA, &m1))?;
            let hn = sp.h(BETA, &m1).mul(&sp.h(DELTA, &m1));
            let sn = s.chi.mu_torus(&hn)?;
            let fn_sq = if trivial {
                rel(one * q.powi(3), one * q * (q - 1.0))
            } else {
                rel(sn * q.powi(3), Complex64::zero())
            };
            [rel(sa, Complex64::zero()), fn_sq]
        }
    })
}

/// The relations `e² = c₀ + c₁ e` implied by [`square_formulas`] for `e = f / s`.
pub fn expected_relations(alg: &HeckeAlgebra) -> Result<[Relation; 2], Error> {
    let f = square_formulas(alg)?;
    let s = normalizations(alg)?;
    Ok([0, 1].map(|i| Relation {
        c0: f[i].c0 / (s[i] * s[i]),
        c1: f[i].c1 / s[i],
    }))
}

/// `e_δ = f_δ / G_δ`, `e_{1-δ} = f_{1-δ} / G_{1-δ}`, or `e_α = f_α`, `e_n = f_n / q`.
pub fn normalized_generators(alg: &mut HeckeAlgebra) -> Result<[HeckeElement; 2], Error> {
    let ids = [alg.register_word(&[0])?, alg.register_word(&[1])?];
    let scale = normalizations(alg)?;
    Ok([
        alg.basis(ids[0]).scale(scale[0].inv()),
        alg.basis(ids[1]).scale(scale[1].inv()),
    ])
}

/// `q^{2m}` or `q^{3m}` for a word of gallery length `m`.
pub fn expected_volume(case: Case, q: u64, word: &[usize]) -> usize {
    let m = word_gallery_length(case, word) as u32;
    let e = match case {
        Case::Sl2Gl1 => 2 * m,
        Case::Gl2 => 3 * m,
    };
    q.pow(e) as usize
}

#[derive(Debug, Clone)]
pub struct WordImage {
    pub word: Vec<usize>,
    pub name: String,
    pub class: usize,
    pub coefficient: Complex64,
    pub support_size: usize,
    pub volume: usize,
    pub expected_volume: usize,
    /// `vol(K a K) vol(K b K) = vol(K ab K)` for `w = a b`, `b` the last letter.
    pub volumes_multiply: bool,
}

impl WordImage {
    pub fn passes(&self, tol: f64) -> bool {
        self.support_size == 1
            && self.coefficient.norm() > tol
            && self.volume == self.expected_volume
            && self.volumes_multiply
    }
}

#[derive(Debug, Clone)]
pub struct ProductCheck {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub distance: f64,
}

#[derive(Debug, Clone)]
pub struct IsoReport {
    pub images: Vec<WordImage>,
    pub products: Vec<ProductCheck>,
}

impl IsoReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.images.iter().all(|i| i.passes(tol)) && self.products.iter().all(|p| p.distance <= tol)
    }
}

/// Images of all reduced words with at most `bound` letters, and agreement of the two
/// multiplications on all pairs of total length at most `bound`.
pub fn iso_check(alg: &mut HeckeAlgebra, bound: usize) -> Result<IsoReport, Error> {
    let case = alg.setting().case();
    let q = alg.setting().q();
    let tol = alg.setting().tolerance;
    let gens = normalized_generators(alg)?;
    let words = reduced_words(bound);
    let mut classes = HashMap::new();
    for w in &words {
        classes.insert(w.clone(), alg.register_word(w)?);
    }
    let mut phi: HashMap<Vec<usize>, HeckeElement> = HashMap::new();
    let mut images = Vec::new();
    for w in &words {
        let class = classes[w];
        let image = match w.split_last() {
            None => alg.unit(),
            Some((&last, rest)) => alg.multiply(&phi[rest], &gens[last])?,
        };
        let volume = alg.class(class).volume();
        let volumes_multiply = match w.split_last() {
            None => true,
            Some((&last, rest)) => {
                alg.class(classes[rest]).volume() * alg.class(classes[&vec![last]]).volume()
                    == volume
            }
        };
        images.push(WordImage {
            word: w.clone(),
            name: word_name(case, w),
            class,
            coefficient: image.coefficient(class),
            support_size: image.support(tol).len(),
            volume,
            expected_volume: expected_volume(case, q, w),
            volumes_multiply,
        });
        phi.insert(w.clone(), image);
    }
    let presented = PresentedAlgebra {
        case,
        relations: expected_relations(alg)?,
    };
    let mut products = Vec::new();
    for u in &words {
        for v in &words {
            if u.len() + v.len() > bound || u.is_empty() || v.is_empty() {
                continue;
            }
            let lhs = alg.multiply(&phi[u], &phi[v])?;
            let abs = presented.multiply(
                &AbstractHeckeElement::word(u),
                &AbstractHeckeElement::word(v),
            );
            let rhs = abs
                .terms
                .iter()
                .fold(HeckeElement::default(), |acc, (w, c)| {
                    acc.add(&phi[w].scale(*c))
                });
            products.push(ProductCheck {
                left: u.clone(),
                right: v.clone(),
                distance: lhs.distance(&rhs),
            });
        }
    }
    Ok(IsoReport { images, products })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chevalley::Sp4;
    use crate::filtration::Mu;
    use crate::hecke::Setting;
    use crate::scalar::Prime;

    #[test]
    fn normalized_generators_satisfy_iwahori_relations() {
        let p = Prime::new(3).unwrap();
        let sp = Sp4::new(p.clone());
        for (case, mu) in [(Case::Sl2Gl1, Mu::legendre(&p)), (Case::Gl2, Mu::trivial())] {
            let mut alg = HeckeAlgebra::new(Setting::strong(&sp, case, mu, 1).unwrap()).unwrap();
            let e = normalized_generators(&mut alg).unwrap();
            let presented = PresentedAlgebra::iwahori(case, 3.0);
            for (i, ei) in e.iter().enumerate() {
                let sq = alg.multiply(ei, ei).unwrap();
                let r = presented.relations[i];
                let expected = alg.unit().scale(r.c0).add(&ei.scale(r.c1));
                assert!(sq.distance(&expected) < 1e-9, "{case} letter {i}");
            }
        }
    }

    #[test]
    fn expected_relations_are_iwahori_in_the_generic_cases() {
        let p = Prime::new(5).unwrap();
        let sp = Sp4::new(p.clone());
        for (case, mu) in [(Case::Sl2Gl1, Mu::legendre(&p)), (Case::Gl2, Mu::trivial())] {
            let alg = HeckeAlgebra::new(Setting::strong(&sp, case, mu, 1).unwrap()).unwrap();
            let r = expected_relations(&alg).unwrap();
            let want = PresentedAlgebra::iwahori(case, 5.0).relations;
            for i in 0..2 {
                assert!((r[i].c0 - want[i].c0).norm() < 1e-9, "{case} {i}");
                assert!((r[i].c1 - want[i].c1).norm() < 1e-9, "{case} {i}");
            }
        }
    }

    #[test]
    fn short_words_map_to_single_cosets() {
        let p = Prime::new(3).unwrap();
        let sp = Sp4::new(p.clone());
        let s = Setting::strong(&sp, Case::Sl2Gl1, Mu::legendre(&p), 1).unwrap();
        let mut alg = HeckeAlgebra::new(s).unwrap();
        let r = iso_check(&mut alg, 2).unwrap();
        assert_eq!(r.images.len(), 5);
        assert!(r.passes(1e-6), "{r:?}");
        assert_eq!(r.images[3].volume, 81);
    }
}
