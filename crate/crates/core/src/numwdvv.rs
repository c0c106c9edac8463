//! Floating-point verification of the WDVV equations for the
//! trilogarithmic prepotential.
//!
//! In coordinates `(x0 = y, x1, ..., xn)` the third-derivative matrices are
//!
//! ```text
//! F0 = 2 diag(1, G)
//! Fi = [ 0                    2 sum c_a a_i a                   ]
//!      [ 2 sum c_a a_i a^T    lambda sum c_a a_i cot a(x) a^T a ]
//! ```
//!
//! and the WDVV equations with pivot `F0` read `Fi F0^{-1} Fj = Fj F0^{-1} Fi`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{PositiveSystem, VConfiguration};
use crate::error::{Error, Result};
use crate::exactnum::{to_f64, Rational};

pub const DEFAULT_MARGIN_FLOOR: f64 = 0.1;
const MAX_SAMPLING_TRIES: usize = 1000;
const SERIES_CUTOFF: f64 = 1e-16;

type CMatrix = DMatrix<Complex64>;

#[derive(Debug, Clone, PartialEq)]
pub struct EvalPoint {
    pub y: Complex64,
    pub x: Vec<Complex64>,
    /// `min |sin a(x)|` over the configuration.
    pub margin: f64,
}

impl EvalPoint {
    pub fn new(cfg: &VConfiguration, y: Complex64, x: Vec<Complex64>) -> Self {
        let margin = margin(&FloatConfig::new(cfg), &x);
        EvalPoint { y, x, margin }
    }
}

/// Covectors and multiplicities converted to `f64` once.
pub(crate) struct FloatConfig {
    pub covectors: Vec<Vec<f64>>,
    pub mults: Vec<f64>,
}

impl FloatConfig {
    pub fn new(cfg: &VConfiguration) -> Self {
        FloatConfig {
            covectors: cfg
                .entries()
                .iter()
                .map(|e| e.covector.coords().iter().map(to_f64).collect())
                .collect(),
            mults: cfg.entries().iter().map(|e| to_f64(&e.mult)).collect(),
        }
    }

    pub fn apply(&self, i: usize, x: &[Complex64]) -> Complex64 {
        self.covectors[i]
            .iter()
            .zip(x)
            .fold(Complex64::zero(), |acc, (a, xi)| acc + xi * *a)
    }
}

pub(crate) fn margin(fc: &FloatConfig, x: &[Complex64]) -> f64 {
    (0..fc.covectors.len())
        .map(|i| fc.apply(i, x).sin().norm())
        .fold(f64::INFINITY, f64::min)
}

pub fn cot(z: Complex64) -> Complex64 {
    z.cos() / z.sin()
}

/// Seeded rejection sampler: `x_k` uniform in `[-2, 2] + i[-1, -1/4]`,
/// accepted once `min |sin a(x)| > margin_floor`. Point `k` draws from its own
/// stream so the result does not depend on evaluation order.
pub fn sample_points(
    cfg: &VConfiguration,
    count: usize,
    seed: u64,
    margin_floor: f64,
) -> Result<Vec<EvalPoint>> {
    let fc = FloatConfig::new(cfg);
    (0..count)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            for _ in 0..MAX_SAMPLING_TRIES {
                let y = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-1.0..-0.25));
                let x: Vec<Complex64> = (0..cfg.dim())
                    .map(|_| Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-1.0..-0.25)))
                    .collect();
                let m = margin(&fc, &x);
                if m > margin_floor {
                    return Ok(EvalPoint { y, x, margin: m });
                }
            }
            Err(Error::SamplingExhausted(MAX_SAMPLING_TRIES))
        })
        .collect()
}

fn principal_lambda(lambda_squared: &Rational) -> Result<Complex64> {
    if lambda_squared.is_zero() {
        return Err(Error::ZeroLambda);
    }
    Ok(Complex64::new(to_f64(lambda_squared), 0.0).sqrt())
}

fn f0(cfg: &VConfiguration) -> CMatrix {
    let n = cfg.dim();
    let mut m = CMatrix::zeros(n + 1, n + 1);
    m[(0, 0)] = Complex64::new(2.0, 0.0);
    for r in 0..n {
        for c in 0..n {
            m[(r + 1, c + 1)] = Complex64::new(2.0 * to_f64(&cfg.gram()[(r, c)]), 0.0);
        }
    }
    m
}

/// `F0^{-1} = diag(1, G^{-1}) / 2`, built from the exact inverse.
fn f0_inverse(cfg: &VConfiguration) -> Result<CMatrix> {
    let inv = cfg.vee_form()?;
    let n = cfg.dim();
    let mut m = CMatrix::zeros(n + 1, n + 1);
    m[(0, 0)] = Complex64::new(0.5, 0.0);
    for r in 0..n {
        for c in 0..n {
            m[(r + 1, c + 1)] = Complex64::new(0.5 * to_f64(&inv[(r, c)]), 0.0);
        }
    }
    Ok(m)
}

fn matrices_with_lambda(cfg: &VConfiguration, fc: &FloatConfig, lambda: Complex64, x: &[Complex64]) -> Vec<CMatrix> {
    let n = cfg.dim();
    let cots: Vec<Complex64> = (0..fc.covectors.len()).map(|a| cot(fc.apply(a, x))).collect();
    let mut out = Vec::with_capacity(n + 1);
    out.push(f0(cfg));
    for i in 0..n {
        let mut m = CMatrix::zeros(n + 1, n + 1);
        for (a, alpha) in fc.covectors.iter().enumerate() {
            let ca = fc.mults[a] * alpha[i];
            if ca == 0.0 {
                continue;
            }
            let lower = lambda * cots[a] * ca;
            for r in 0..n {
                let edge = Complex64::new(2.0 * ca * alpha[r], 0.0);
                m[(0, r + 1)] += edge;
                m[(r + 1, 0)] += edge;
                for c in 0..n {
                    m[(r + 1, c + 1)] += lower * (alpha[r] * alpha[c]);
                }
            }
        }
        out.push(m);
    }
    out
}

/// The matrices `F0, ..., Fn` at `p`, with `lambda` the principal square
/// root of `lambda_squared`.
pub fn third_derivative_matrices(
    cfg: &VConfiguration,
    lambda_squared: &Rational,
    p: &EvalPoint,
) -> Result<Vec<CMatrix>> {
    cfg.vee_form()?;
    let lambda = principal_lambda(lambda_squared)?;
    let fc = FloatConfig::new(cfg);
    let m = margin(&fc, &p.x);
    if !(m > 1e-12) {
        return Err(Error::SingularPoint { margin: m });
    }
    Ok(matrices_with_lambda(cfg, &fc, lambda, &p.x))
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    /// Max over pairs `(i, j)` of the entrywise max commutator magnitude.
    pub per_point: Vec<f64>,
    pub aggregate: f64,
    /// Max over points for each pair `(i, j)`, `i < j`.
    pub per_pair: Vec<((usize, usize), f64)>,
    pub points: Vec<EvalPoint>,
    pub seed: u64,
}

/// Commutator residuals with an explicit complex `lambda`.
pub fn residuals_with_lambda(cfg: &VConfiguration, lambda: Complex64, points: &[EvalPoint]) -> Result<Vec<Vec<((usize, usize), f64)>>> {
    let f0_inv = f0_inverse(cfg)?;
    let fc = FloatConfig::new(cfg);
    let n = cfg.dim();
    Ok(points
        .par_iter()
        .map(|p| {
            let fs = matrices_with_lambda(cfg, &fc, lambda, &p.x);
            let left: Vec<CMatrix> = fs.iter().map(|f| f * &f0_inv).collect();
            let mut out = Vec::new();
            for i in 0..=n {
                for j in i + 1..=n {
                    let comm = &left[i] * &fs[j] - &left[j] * &fs[i];
                    out.push(((i, j), max_abs(&comm)));
                }
            }
            out
        })
        .collect())
}

fn report(per: Vec<Vec<((usize, usize), f64)>>, points: Vec<EvalPoint>, seed: u64) -> ResidualReport {
    let per_point: Vec<f64> = per
        .iter()
        .map(|v| v.iter().map(|x| x.1).fold(0.0, f64::max))
        .collect();
    let aggregate = per_point.iter().copied().fold(0.0, f64::max);
    let mut per_pair: Vec<((usize, usize), f64)> = per.first().map(|v| v.iter().map(|(k, _)| (*k, 0.0)).collect()).unwrap_or_default();
    for v in &per {
        for (slot, (_, r)) in per_pair.iter_mut().zip(v) {
            slot.1 = slot.1.max(*r);
        }
    }
    ResidualReport {
        per_point,
        aggregate,
        per_pair,
        points,
        seed,
    }
}

/// WDVV commutator residuals at `num_points` seeded points.
pub fn wdvv_residual(
    cfg: &VConfiguration,
    lambda_squared: &Rational,
    num_points: usize,
    seed: u64,
    margin_floor: f64,
) -> Result<ResidualReport> {
    cfg.vee_form()?;
    let lambda = principal_lambda(lambda_squared)?;
    let points = sample_points(cfg, num_points, seed, margin_floor)?;
    let per = residuals_with_lambda(cfg, lambda, &points)?;
    Ok(report(per, points, seed))
}

/// Same as [`wdvv_residual`] but with `lambda` itself supplied.
pub fn wdvv_residual_lambda(
    cfg: &VConfiguration,
    lambda: Complex64,
    num_points: usize,
    seed: u64,
    margin_floor: f64,
) -> Result<ResidualReport> {
    let points = sample_points(cfg, num_points, seed, margin_floor)?;
    let per = residuals_with_lambda(cfg, lambda, &points)?;
    Ok(report(per, points, seed))
}

/// `Li_3(z) = sum_{k >= 1} z^k / k^3` for `|z| < 1`, summed until the term
/// drops below `1e-16`.
pub fn trilog(z: Complex64) -> Option<Complex64> {
    if !(z.norm() < 1.0) {
        return None;
    }
    let mut sum = Complex64::zero();
    let mut power = z;
    let mut k = 1u64;
    loop {
        let kf = k as f64;
        let term = power / (kf * kf * kf);
        sum += term;
        if term.norm() < SERIES_CUTOFF || power.norm() < SERIES_CUTOFF {
            return Some(sum);
        }
        power *= z;
        k += 1;
    }
}

/// `f(x) = i x^3 / 6 + Li_3(e^{-2ix}) / 4`, which satisfies `f''' = cot`.
/// Defined for `Im x < 0`.
pub fn f_ansatz(x: Complex64) -> Option<Complex64> {
    if !(x.im < 0.0) {
        return None;
    }
    let i = Complex64::i();
    let li = trilog((-2.0 * i * x).exp())?;
    Some(i * x * x * x / 6.0 + li / 4.0)
}

/// `F = y^3/3 + sum c_a a(x)^2 y + lambda sum_{a in A+} c_a f(a(x))`.
pub fn eval_prepotential(
    cfg: &VConfiguration,
    lambda_squared: &Rational,
    psys: &PositiveSystem,
    p: &EvalPoint,
) -> Result<Complex64> {
    cfg.vee_form()?;
    let lambda = principal_lambda(lambda_squared)?;
    let fc = FloatConfig::new(cfg);
    let mut cubic = p.y * p.y * p.y / 3.0;
    let mut trig = Complex64::zero();
    for a in 0..cfg.len() {
        let ax = fc.apply(a, &p.x) * f64::from(psys.signs[a]);
        cubic += ax * ax * p.y * fc.mults[a];
        trig += f_ansatz(ax).ok_or(Error::OutOfDomain(a))? * fc.mults[a];
    }
    Ok(cubic + lambda * trig)
}

/// Max over `samples` of `|delta_h^3 f / h^3 - cot x|` with the central
/// stencil `f(x+3h/2) - 3f(x+h/2) + 3f(x-h/2) - f(x-3h/2)`.
pub fn check_f_derivative(samples: &[Complex64], h: f64) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (k, &x) in samples.iter().enumerate() {
        let f = |t: f64| f_ansatz(x + t * h).ok_or(Error::OutOfDomain(k));
        let d3 = (f(1.5)? - f(0.5)? * 3.0 + f(-0.5)? * 3.0 - f(-1.5)?) / (h * h * h);
        worst = worst.max((d3 - cot(x)).norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::positive_system;
    use crate::config::tests::{a2, b2, cfg_from};
    use crate::exactnum::int;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn f0_is_constant_and_symmetric() {
        let cfg = a2();
        let p = EvalPoint::new(&cfg, c(0.1, 0.0), vec![c(0.7, 0.1), c(0.3, -0.2)]);
        let q = EvalPoint::new(&cfg, c(-1.0, 0.5), vec![c(-0.4, -0.6), c(1.3, -0.9)]);
        let fp = third_derivative_matrices(&cfg, &int(36), &p).unwrap();
        let fq = third_derivative_matrices(&cfg, &int(36), &q).unwrap();
        assert_eq!(fp[0], fq[0]);
        assert!(fp[0].clone().try_inverse().is_some());
        // off-diagonal block of F1: 2 * ((1,0) + (1,1)) = (4, 2)
        assert_eq!(fp[1][(0, 1)], c(4.0, 0.0));
        assert_eq!(fp[1][(0, 2)], c(2.0, 0.0));
        assert_eq!(fp[1][(1, 0)], c(4.0, 0.0));
    }

    #[test]
    fn matrices_are_symmetric() {
        let cfg = b2(1, 1);
        let pts = sample_points(&cfg, 10, 3, DEFAULT_MARGIN_FLOOR).unwrap();
        for p in &pts {
            for f in third_derivative_matrices(&cfg, &int(54), p).unwrap() {
                assert!(max_abs(&(f.clone() - f.transpose())) < 1e-15);
            }
        }
    }

    #[test]
    fn matrix_errors() {
        let cfg = a2();
        let p = EvalPoint::new(&cfg, c(0.0, 0.0), vec![c(0.0, 0.0), c(0.3, -0.2)]);
        assert!(matches!(
            third_derivative_matrices(&cfg, &int(36), &p),
            Err(Error::SingularPoint { .. })
        ));
        let q = EvalPoint::new(&cfg, c(0.0, 0.0), vec![c(0.5, -0.5), c(0.3, -0.2)]);
        assert_eq!(third_derivative_matrices(&cfg, &int(0), &q), Err(Error::ZeroLambda));
    }

    #[test]
    fn residual_examples() {
        let r = wdvv_residual(&a2(), &int(36), 10, 0, DEFAULT_MARGIN_FLOOR).unwrap();
        assert_eq!(r.per_point.len(), 10);
        assert!(r.aggregate < 1e-9, "{}", r.aggregate);
        let r = wdvv_residual(&b2(1, 1), &int(54), 10, 0, DEFAULT_MARGIN_FLOOR).unwrap();
        assert!(r.aggregate < 1e-9, "{}", r.aggregate);
        let r = wdvv_residual(&a2(), &int(35), 10, 0, DEFAULT_MARGIN_FLOOR).unwrap();
        assert!(r.aggregate > 1e-3, "{}", r.aggregate);
    }

    #[test]
    fn pivot_pairs_are_trivial_and_sign_of_lambda_is_irrelevant() {
        let cfg = b2(1, 1);
        let r = wdvv_residual(&cfg, &int(50), 10, 5, DEFAULT_MARGIN_FLOOR).unwrap();
        for ((i, _), v) in &r.per_pair {
            if *i == 0 {
                assert!(*v < 1e-12);
            }
        }
        let lam = Complex64::new(50f64.sqrt(), 0.0);
        let plus = wdvv_residual_lambda(&cfg, lam, 10, 5, DEFAULT_MARGIN_FLOOR).unwrap();
        let minus = wdvv_residual_lambda(&cfg, -lam, 10, 5, DEFAULT_MARGIN_FLOOR).unwrap();
        for (a, b) in plus.per_point.iter().zip(&minus.per_point) {
            assert!((a - b).abs() <= 1e-12 * a.max(1.0));
        }
    }

    #[test]
    fn sampling_is_deterministic_and_respects_floor() {
        let cfg = a2();
        let a = sample_points(&cfg, 8, 42, 0.2).unwrap();
        let b = sample_points(&cfg, 8, 42, 0.2).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|p| p.margin > 0.2));
        assert!(a.iter().all(|p| p.x.iter().all(|z| z.im < 0.0)));
        assert_ne!(a, sample_points(&cfg, 8, 43, 0.2).unwrap());
        assert_eq!(
            sample_points(&cfg, 1, 0, 10.0),
            Err(Error::SamplingExhausted(1000))
        );
    }

    #[test]
    fn trilog_small_argument() {
        // Li3(z) = z + z^2/8 + z^3/27 + ...
        let z = c(1e-3, 2e-3);
        let approx = z + z * z / 8.0 + z * z * z / 27.0;
        assert!((trilog(z).unwrap() - approx).norm() < 1e-12);
        assert!(trilog(c(1.0, 0.0)).is_none());
        // Li3(1/2) = 0.5372131936080402...
        assert!((trilog(c(0.5, 0.0)).unwrap().re - 0.537_213_193_608_040_2).abs() < 1e-15);
    }

    #[test]
    fn f_third_derivative_matches_cot() {
        for x in [c(0.5, -1.5), c(2.0, -1.5), c(-1.0, -2.0), c(1.0, -1.25), c(3.0, -1.75)] {
            assert!(check_f_derivative(&[x], 1e-2).unwrap() < 1e-5);
        }
        // closer to the real axis the O(h^2) constant grows: |err| ~ h^2/8 |cot''|
        for x in [c(0.5, -1.0), c(2.0, -0.5), c(1.0, -1.0)] {
            let dev = check_f_derivative(&[x], 1e-2).unwrap();
            let cot2 = 2.0 * cot(x) / (x.sin() * x.sin());
            let predicted = 1e-4 / 8.0 * cot2.norm();
            assert!((dev - predicted).abs() < 0.05 * predicted, "{dev} vs {predicted}");
        }
        let samples = [c(0.5, -1.0), c(2.0, -0.5), c(1.0, -1.0), c(-1.5, -0.7), c(0.1, -0.4)];
        for x in samples {
            let a = check_f_derivative(&[x], 1e-2).unwrap();
            let b = check_f_derivative(&[x], 5e-3).unwrap();
            assert!((a / b - 4.0).abs() < 0.1, "{}", a / b);
        }
        assert_eq!(check_f_derivative(&[c(0.5, 0.5)], 1e-2), Err(Error::OutOfDomain(0)));
    }

    #[test]
    fn prepotential_polynomial_part_and_smallest_case() {
        let cfg = a2();
        let ps = positive_system(&cfg, None).unwrap();
        let x = vec![c(0.3, -0.5), c(-0.2, -0.7)];
        let y = c(0.4, 0.1);
        let d = c(0.05, -0.02);
        let p = EvalPoint::new(&cfg, y, x.clone());
        let q = EvalPoint::new(&cfg, y + d, x.clone());
        let fp = eval_prepotential(&cfg, &int(36), &ps, &p).unwrap();
        let fq = eval_prepotential(&cfg, &int(36), &ps, &q).unwrap();
        let fc = FloatConfig::new(&cfg);
        let quad: Complex64 = (0..3).map(|a| fc.apply(a, &x) * fc.apply(a, &x) * fc.mults[a]).sum();
        let expected = y * y * d + y * d * d + d * d * d / 3.0 + d * quad;
        assert!((fq - fp - expected).norm() < 1e-14);

        let one = cfg_from(1, &[(&[1], int(1))]);
        let ps1 = positive_system(&one, None).unwrap();
        let x0 = c(0.0, -1.0);
        let p = EvalPoint::new(&one, y, vec![x0]);
        // degenerate forms are rejected before evaluation; this one is fine (G = 1)
        let v = eval_prepotential(&one, &int(1), &ps1, &p).unwrap();
        let direct = y * y * y / 3.0 + x0 * x0 * y + f_ansatz(x0).unwrap();
        assert!((v - direct).norm() < 1e-14);
        let out = EvalPoint::new(&one, y, vec![c(0.3, 0.2)]);
        assert_eq!(eval_prepotential(&one, &int(1), &ps1, &out), Err(Error::OutOfDomain(0)));
    }
}
