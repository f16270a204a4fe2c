//! Gauss sums `G_δ(μ, ψ)` and `G_{1-δ}(μ, ψ)` attached to the first case.

use num_complex::Complex64;

use crate::affine::{AffineRoot, BETA, DELTA};
use crate::chevalley::Sp4;
use crate::filtration::{root_of_unity, Character, FiltrationGroup, Mu};
use crate::scalar::{int, Prime};
use crate::Error;

/// `Σ_{u ∈ F_p^×} μ(u) ζ^{m a u}` with `ζ = exp(2πi/p)`.
pub fn gauss_sum(p: &Prime, mu: Mu, multiplier: u64, a: u64) -> Result<Complex64, Error> {
    let mut g = Complex64::default();
    for u in 1..p.get() {
        let e = multiplier % p.get() * (a % p.get()) % p.get() * u % p.get();
        g += mu.at(p, &int(u as i64))? * root_of_unity(e, p.get());
    }
    Ok(g)
}

/// `G_δ = Σ_u μ(h_δ(u)) ψ(x_β(a u))`, evaluated through the group elements.
pub fn g_delta(sp: &Sp4, chi: &Character) -> Result<Complex64, Error> {
    let k = FiltrationGroup::k_plus(sp);
    let a = sp.commutator_constants().a;
    let mut g = Complex64::default();
    for u in 1..sp.prime().get() as i64 {
        let mu = chi.mu_torus(&sp.h(DELTA, &int(u)))?;
        g += mu * chi.eval(&k, &sp.x(BETA, &(&a * int(u))))?;
    }
    Ok(g)
}

/// `G_{1-δ} = Σ_u μ(h_{1-δ}(u)) ψ(x_{1-β}(a' u))` with `h_{1-δ}(u) = h_δ(1/u)`.
pub fn g_one_minus_delta(sp: &Sp4, chi: &Character) -> Result<Complex64, Error> {
    let k = FiltrationGroup::k_plus(sp);
    let a1 = sp.commutator_constants().a1;
    let root = AffineRoot::new(BETA.to_vec(), 0).negate_plus(1);
    let mut g = Complex64::default();
    for u in 1..sp.prime().get() as i64 {
        let mu = chi.mu_torus(&sp.h(DELTA, &int(u).recip()))?;
        g += mu * chi.eval(&k, &sp.x_affine(&root, &(&a1 * int(u)))?)?;
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::Case;
    use std::f64::consts::PI;

    fn prime(p: u64) -> Prime {
        Prime::new(p).unwrap()
    }

    #[test]
    fn trivial_mu_gives_minus_one() {
        for p in [3, 5, 7] {
            let g = gauss_sum(&prime(p), Mu::trivial(), 1, 1).unwrap();
            assert!((g + 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn two_term_value_at_three() {
        let p = prime(3);
        let z = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
        let direct = z - z * z;
        let g = gauss_sum(&p, Mu::legendre(&p), 1, 1).unwrap();
        assert!((g - direct).norm() < 1e-12);
        assert!((g - Complex64::new(0.0, 3f64.sqrt())).norm() < 1e-12);
    }

    #[test]
    fn absolute_value_and_square() {
        for p in [3u64, 5, 7] {
            let pr = prime(p);
            let mu = Mu::legendre(&pr);
            let sign = mu.at(&pr, &int(-1)).unwrap();
            for m in 1..p {
                let g = gauss_sum(&pr, mu, m, 1).unwrap();
                assert!((g.norm_sqr() - p as f64).abs() < 1e-9);
                assert!((g * g - sign * p as f64).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn group_sums_match_the_scalar_sum() {
        for p in [3u64, 5] {
            let sp = Sp4::new(prime(p));
            let mu = Mu::legendre(sp.prime());
            for m in 1..p {
                let chi = Character::normalized(&sp, Case::Sl2Gl1, m, mu).unwrap();
                let g = g_delta(&sp, &chi).unwrap();
                let expected = gauss_sum(sp.prime(), mu, m, 1).unwrap();
                assert!((g - expected).norm() < 1e-9);
                let g1 = g_one_minus_delta(&sp, &chi).unwrap();
                assert!((g1 * g1 - g * g).norm() < 1e-9);
            }
        }
    }
}
