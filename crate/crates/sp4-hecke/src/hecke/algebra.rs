//! The convolution algebra `H(K, χ)` on a registry of supported double cosets.

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;

use super::coset::{CosetTable, Key, Setting};
use super::words::{word_lift, word_name};
use crate::chevalley::GroupElement;
use crate::Error;

/// A supported double coset `K n K` with its left-coset table.
#[derive(Debug, Clone)]
pub struct Class {
    pub name: String,
    pub table: CosetTable,
}

impl Class {
    pub fn base(&self) -> &GroupElement {
        &self.table.base
    }

    /// Number of left cosets, the volume of `K n K` when `vol(K) = 1`.
    pub fn volume(&self) -> usize {
        self.table.len()
    }
}

/// A finite combination of the basis functions `f_c` with `f_c(n_c) = 1`, indexed by
/// class id in a [`HeckeAlgebra`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct HeckeElement {
    pub terms: BTreeMap<usize, Complex64>,
}

impl HeckeElement {
    pub fn single(class: usize, c: Complex64) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(class, c);
        HeckeElement { terms }
    }

    pub fn coefficient(&self, class: usize) -> Complex64 {
        self.terms.get(&class).copied().unwrap_or_default()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        HeckeElement {
            terms: self.terms.iter().map(|(&k, &v)| (k, v * c)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (&k, &v) in &other.terms {
            *terms.entry(k).or_default() += v;
        }
        HeckeElement { terms }
    }

    /// Largest coefficient difference.
    pub fn distance(&self, other: &Self) -> f64 {
        self.terms
            .keys()
            .chain(other.terms.keys())
            .map(|&k| (self.coefficient(k) - other.coefficient(k)).norm())
            .fold(0.0, f64::max)
    }

    /// Drops coefficients below `tol`.
    pub fn pruned(&self, tol: f64) -> Self {
        HeckeElement {
            terms: self
                .terms
                .iter()
                .filter(|(_, v)| v.norm() > tol)
                .map(|(&k, &v)| (k, v))
                .collect(),
        }
    }

    pub fn support(&self, tol: f64) -> Vec<usize> {
        self.pruned(tol).terms.into_keys().collect()
    }
}

/// `H(K, χ)` restricted to the registered classes. Class 0 is `K` itself.
#[derive(Debug, Clone)]
pub struct HeckeAlgebra {
    setting: Setting,
    classes: Vec<Class>,
}

/// Left cosets with accumulated values, in first-seen order.
#[derive(Default)]
struct Accumulator {
    reps: Vec<GroupElement>,
    values: Vec<Complex64>,
    index: HashMap<Key, Vec<usize>>,
}

impl Accumulator {
    /// Adds the function `δ_{cK}`, `δ_{cK}(ck) = χ(k)`, with weight `w`.
    fn add(&mut self, s: &Setting, c: GroupElement, w: Complex64) -> Result<(), Error> {
        let key = s.key(&c);
        if let Some(bucket) = self.index.get(&key) {
            for &i in bucket {
                if let Some(k) = s.same_coset(&c, &self.reps[i]) {
                    self.values[i] += w * s.chi(&k)?;
                    return Ok(());
                }
            }
        }
        self.index.entry(key).or_default().push(self.reps.len());
        self.reps.push(c);
        self.values.push(w);
        Ok(())
    }
}

impl HeckeAlgebra {
    pub fn new(setting: Setting) -> Result<Self, Error> {
        let mut alg = HeckeAlgebra {
            setting,
            classes: Vec::new(),
        };
        alg.register("1", &GroupElement::identity())?;
        Ok(alg)
    }

    pub fn setting(&self) -> &Setting {
        &self.setting
    }

    pub fn classes(&self) -> &[Class] {
        &self.classes
    }

    pub fn class(&self, id: usize) -> &Class {
        &self.classes[id]
    }

    pub fn q(&self) -> f64 {
        self.setting.q() as f64
    }

    /// Registers `K n K`, returning the id of an existing class containing `n` if any.
    /// Fails when the double coset carries no function.
    pub fn register(&mut self, name: &str, n: &GroupElement) -> Result<usize, Error> {
        if let Some((id, _, _)) = self.locate(n) {
            return Ok(id);
        }
        let table = CosetTable::build(&self.setting, n)?;
        if !table.supports() {
            return Err(Error::Invalid(format!("{name} carries no function")));
        }
        self.classes.push(Class {
            name: name.to_string(),
            table,
        });
        Ok(self.classes.len() - 1)
    }

    /// Registers the class of a generator word.
    pub fn register_word(&mut self, word: &[usize]) -> Result<usize, Error> {
        let case = self.setting.case();
        let n = word_lift(self.setting.sp(), case, word);
        self.register(&word_name(case, word), &n)
    }

    pub fn find_class(&self, name: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.name == name)
    }

    /// Class id, coset index `j` and `k = x_j⁻¹ y`.
    pub fn locate(&self, y: &GroupElement) -> Option<(usize, usize, GroupElement)> {
        let key = self.setting.key(y);
        self.classes.iter().enumerate().find_map(|(id, c)| {
            c.table
                .find_keyed(&self.setting, &key, y)
                .map(|(j, k)| (id, j, k))
        })
    }

    pub fn unit(&self) -> HeckeElement {
        HeckeElement::single(0, Complex64::new(1.0, 0.0))
    }

    pub fn basis(&self, id: usize) -> HeckeElement {
        HeckeElement::single(id, Complex64::new(1.0, 0.0))
    }

    /// `f(y)`, zero off the registered support of `f`.
    pub fn evaluate(&self, f: &HeckeElement, y: &GroupElement) -> Result<Complex64, Error> {
        let key = self.setting.key(y);
        let mut total = Complex64::default();
        for (&id, &c) in &f.terms {
            let t = &self.classes[id].table;
            if let Some((j, k)) = t.find_keyed(&self.setting, &key, y) {
                total += c * t.weights[j] * self.setting.chi(&k)?;
            }
        }
        Ok(total)
    }

    /// `(f * g)(x) = Σ_j f(x_j) g(x_j⁻¹ x)` over the left cosets of the support of `f`.
    pub fn convolve_at(
        &self,
        f: &HeckeElement,
        g: &HeckeElement,
        x: &GroupElement,
    ) -> Result<Complex64, Error> {
        let mut total = Complex64::default();
        for (&id, &c) in &f.terms {
            let t = &self.classes[id].table;
            for (xj, w) in t.reps.iter().zip(t.weights.iter()) {
                let v = self.evaluate(g, &xj.inverse().mul(x))?;
                total += c * w * v;
            }
        }
        Ok(total)
    }

    /// `f * g = Σ_{i,j} f(a_i) g(b_j) δ_{a_i b_j K}` expanded in the registered basis.
    /// Fails on mass outside the registered classes or on values not of the form
    /// `c · f_class`.
    pub fn multiply(&self, f: &HeckeElement, g: &HeckeElement) -> Result<HeckeElement, Error> {
        let s = &self.setting;
        let mut acc = Accumulator::default();
        for (&fi, &fc) in &f.terms {
            let ft = &self.classes[fi].table;
            for (a, aw) in ft.reps.iter().zip(ft.weights.iter()) {
                for (&gi, &gc) in &g.terms {
                    let gt = &self.classes[gi].table;
                    for (b, bw) in gt.reps.iter().zip(gt.weights.iter()) {
                        acc.add(s, a.mul(b), fc * aw * gc * bw)?;
                    }
                }
            }
        }
        // values at the table representatives x_j, per class
        let mut at_reps: BTreeMap<usize, HashMap<usize, Complex64>> = BTreeMap::new();
        for (r, v) in acc.reps.iter().zip(acc.values.iter()) {
            match self.locate(r) {
                Some((id, j, k)) => {
                    let vj = v * s.chi(&k)?.conj();
                    *at_reps.entry(id).or_default().entry(j).or_default() += vj;
                }
                None if v.norm() > s.tolerance => {
                    return Err(Error::Invalid(format!(
                        "product has mass {:.3e} outside the registered classes",
                        v.norm()
                    )));
                }
                None => {}
            }
        }
        let mut out = HeckeElement::default();
        for (id, vals) in at_reps {
            let t = &self.classes[id].table;
            let base = vals.get(&0).copied().unwrap_or_default();
            for j in 0..t.len() {
                let v = vals.get(&j).copied().unwrap_or_default();
                if (v - base * t.weights[j]).norm() > s.tolerance * (1.0 + base.norm()) {
                    return Err(Error::Invalid(format!(
                        "product is not a multiple of f_{} on its cosets",
                        self.classes[id].name
                    )));
                }
            }
            if base.norm() > s.tolerance {
                out.terms.insert(id, base);
            }
        }
        Ok(out)
    }

    /// Human-readable expansion.
    pub fn describe(&self, f: &HeckeElement) -> String {
        if f.terms.is_empty() {
            return "0".into();
        }
        f.terms
            .iter()
            .map(|(&id, c)| format!("({:.6}{:+.6}i)·f[{}]", c.re, c.im, self.classes[id].name))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::Case;
    use crate::chevalley::Sp4;
    use crate::filtration::Mu;
    use crate::scalar::Prime;

    fn algebra(p: u64, case: Case, mu: Mu) -> HeckeAlgebra {
        let sp = Sp4::new(Prime::new(p).unwrap());
        HeckeAlgebra::new(Setting::strong(&sp, case, mu, 1).unwrap()).unwrap()
    }

    #[test]
    fn unit_law() {
        let mut a = algebra(3, Case::Sl2Gl1, Mu::legendre(&Prime::new(3).unwrap()));
        let d = a.register_word(&[0]).unwrap();
        let f = a.basis(d);
        assert_eq!(a.multiply(&a.unit(), &f).unwrap().distance(&f), 0.0);
        assert!(a.multiply(&f, &a.unit()).unwrap().distance(&f) < 1e-12);
    }

    #[test]
    fn evaluation_at_base_and_inverse() {
        let p = Prime::new(3).unwrap();
        let mut a = algebra(3, Case::Sl2Gl1, Mu::legendre(&p));
        let d = a.register_word(&[0]).unwrap();
        let f = a.basis(d);
        let n = a.class(d).base().clone();
        assert!((a.evaluate(&f, &n).unwrap() - 1.0).norm() < 1e-12);
        // Legendre(-1) = -1 at p = 3
        assert!((a.evaluate(&f, &n.inverse()).unwrap() + 1.0).norm() < 1e-12);
        assert_eq!(
            a.evaluate(&f, &GroupElement::identity()).unwrap(),
            Complex64::default()
        );
    }

    #[test]
    fn pointwise_and_accumulated_products_agree() {
        let p = Prime::new(3).unwrap();
        let mut a = algebra(3, Case::Sl2Gl1, Mu::legendre(&p));
        let d = a.register_word(&[0]).unwrap();
        let f = a.basis(d);
        let ff = a.multiply(&f, &f).unwrap();
        for id in [0, d] {
            let x = a.class(id).base().clone();
            let direct = a.convolve_at(&f, &f, &x).unwrap();
            assert!((direct - ff.coefficient(id)).norm() < 1e-9);
        }
    }

    #[test]
    fn mass_outside_registry_is_an_error() {
        let p = Prime::new(3).unwrap();
        let mut a = algebra(3, Case::Sl2Gl1, Mu::legendre(&p));
        let d = a.register_word(&[0]).unwrap();
        let e = a.register_word(&[1]).unwrap();
        assert!(a.multiply(&a.basis(d), &a.basis(e)).is_err());
    }
}
