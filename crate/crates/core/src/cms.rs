//! Generalized Calogero-Moser-Sutherland operators
//!
//! ```text
//! L = -Laplacian + sum c_a (c_a + 1) (a, a) / sin^2 a(x)
//! ```
//!
//! built from a metric on `V*`, and their factorized eigenfunction
//! `psi = prod sin^{-c_a} a(x)`. `L psi = mu psi` holds iff
//! `sum_{a != b} c_a c_b (a, b) cot a(x) cot b(x)` is constant.

use num_complex::Complex64;
use num_integer::Integer;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::config::{PositiveSystem, VConfiguration};
use crate::error::{Error, Result};
use crate::exactnum::{common_denominator, mat_inverse, to_f64, RatMatrix, Rational};
use crate::numwdvv::{cot, sample_points, FloatConfig, DEFAULT_MARGIN_FLOOR};
use crate::veecheck::{check_series_condition, check_series_with_form, coupling_tensors, solve_proportionality, Proportionality, SeriesCheckReport};

/// Inner product on `V*` used by the operator. Entry `(i, j)` is
/// `(e^i, e^j)`, so the Laplacian is `sum metric[i][j] d_i d_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Metric {
    pub matrix: RatMatrix,
    pub is_vee_form: bool,
}

impl Metric {
    pub fn new(matrix: RatMatrix) -> Result<Self> {
        if !matrix.is_symmetric() {
            return Err(Error::ShapeMismatch("metric must be square and symmetric".into()));
        }
        Ok(Metric {
            matrix,
            is_vee_form: false,
        })
    }

    /// The product induced by the configuration's own form.
    pub fn vee(cfg: &VConfiguration) -> Result<Self> {
        Ok(Metric {
            matrix: cfg.vee_form()?.clone(),
            is_vee_form: true,
        })
    }

    pub fn scaled(&self, t: &Rational) -> Self {
        Metric {
            matrix: self.matrix.scale(t),
            is_vee_form: self.is_vee_form && t.is_one(),
        }
    }

    fn checked(&self, cfg: &VConfiguration) -> Result<&RatMatrix> {
        if self.matrix.rows() != cfg.dim() {
            return Err(Error::DimensionMismatch {
                expected: cfg.dim(),
                found: self.matrix.rows(),
            });
        }
        if self.matrix.determinant()?.is_zero() {
            return Err(Error::DegenerateForm);
        }
        Ok(&self.matrix)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CmsReport {
    pub identity_values: Vec<Complex64>,
    pub mean: Complex64,
    /// `max |value - mean|`.
    pub max_deviation: f64,
    pub eigenvalue_estimate: Complex64,
    pub eigenvalue_deviation: f64,
}

impl CmsReport {
    pub fn is_constant(&self, tol: f64) -> bool {
        self.max_deviation < tol
    }
}

fn reject_collinear(cfg: &VConfiguration) -> Result<()> {
    for i in 0..cfg.len() {
        for j in i + 1..cfg.len() {
            if cfg.covector(i).is_parallel(cfg.covector(j)) {
                return Err(Error::CollinearPair(i, j));
            }
        }
    }
    Ok(())
}

struct FloatMetric {
    m: Vec<Vec<f64>>,
    /// `(a, b)` for every pair of entries.
    pairing: Vec<Vec<f64>>,
}

impl FloatMetric {
    fn new(cfg: &VConfiguration, metric: &RatMatrix) -> Self {
        let n = cfg.dim();
        let m = (0..n).map(|r| (0..n).map(|c| to_f64(&metric[(r, c)])).collect()).collect();
        let pairing = (0..cfg.len())
            .map(|a| {
                (0..cfg.len())
                    .map(|b| to_f64(&metric.bilinear(cfg.covector(a).coords(), cfg.covector(b).coords())))
                    .collect()
            })
            .collect();
        FloatMetric { m, pairing }
    }
}

fn identity_value(fc: &FloatConfig, fm: &FloatMetric, cots: &[Complex64]) -> Complex64 {
    let mut s = Complex64::zero();
    for a in 0..cots.len() {
        for b in 0..cots.len() {
            if a != b {
                s += cots[a] * cots[b] * (fc.mults[a] * fc.mults[b] * fm.pairing[a][b]);
            }
        }
    }
    s
}

/// `(L psi) / psi` from the gradient and Hessian of `log psi`.
fn log_derivative_eigenvalue(fc: &FloatConfig, fm: &FloatMetric, x: &[Complex64]) -> Complex64 {
    let n = x.len();
    let mut grad = vec![Complex64::zero(); n];
    let mut hess = vec![vec![Complex64::zero(); n]; n];
    let mut potential = Complex64::zero();
    for (a, alpha) in fc.covectors.iter().enumerate() {
        let z = fc.apply(a, x);
        let s = z.sin();
        let csc2 = Complex64::one() / (s * s);
        let ct = cot(z);
        let c = fc.mults[a];
        for i in 0..n {
            grad[i] -= ct * (c * alpha[i]);
            for j in 0..n {
                hess[i][j] += csc2 * (c * alpha[i] * alpha[j]);
            }
        }
        potential += csc2 * (c * (c + 1.0) * fm.pairing[a][a]);
    }
    let mut laplacian = Complex64::zero();
    for i in 0..n {
        for j in 0..n {
            laplacian += (hess[i][j] + grad[i] * grad[j]) * fm.m[i][j];
        }
    }
    potential - laplacian
}

fn spread(values: &[Complex64]) -> (Complex64, f64) {
    let mean = values.iter().sum::<Complex64>() / values.len().max(1) as f64;
    let dev = values.iter().map(|v| (v - mean).norm()).fold(0.0, f64::max);
    (mean, dev)
}

/// Evaluates the cotangent double sum and the eigenvalue ratio at seeded
/// points.
pub fn cms_identity_residual(
    cfg: &VConfiguration,
    metric: &Metric,
    num_points: usize,
    seed: u64,
) -> Result<CmsReport> {
    reject_collinear(cfg)?;
    let m = metric.checked(cfg)?;
    let fc = FloatConfig::new(cfg);
    let fm = FloatMetric::new(cfg, m);
    let points = sample_points(cfg, num_points, seed, DEFAULT_MARGIN_FLOOR)?;
    let mut identity_values = Vec::with_capacity(points.len());
    let mut eigen = Vec::with_capacity(points.len());
    for p in &points {
        let cots: Vec<Complex64> = (0..cfg.len()).map(|a| cot(fc.apply(a, &p.x))).collect();
        identity_values.push(identity_value(&fc, &fm, &cots));
        eigen.push(log_derivative_eigenvalue(&fc, &fm, &p.x));
    }
    let (mean, max_deviation) = spread(&identity_values);
    let (eigenvalue_estimate, eigenvalue_deviation) = spread(&eigen);
    Ok(CmsReport {
        identity_values,
        mean,
        max_deviation,
        eigenvalue_estimate,
        eigenvalue_deviation,
    })
}

/// Mean and spread of `(L psi) / psi` over seeded points.
pub fn eigenvalue_estimate(
    cfg: &VConfiguration,
    metric: &Metric,
    num_points: usize,
    seed: u64,
) -> Result<(Complex64, f64)> {
    let r = cms_identity_residual(cfg, metric, num_points, seed)?;
    Ok((r.eigenvalue_estimate, r.eigenvalue_deviation))
}

/// `sum c_a^2 (a, a) - const`, the eigenvalue implied by a constant double sum.
pub fn predicted_eigenvalue(cfg: &VConfiguration, metric: &Metric, constant: Complex64) -> Result<Complex64> {
    let m = metric.checked(cfg)?;
    let diag = cfg.entries().iter().fold(Rational::zero(), |acc, e| {
        acc + &e.mult * &e.mult * m.bilinear(e.covector.coords(), e.covector.coords())
    });
    Ok(Complex64::new(to_f64(&diag), 0.0) - constant)
}

/// The series condition with `(a, b)` taken from the supplied metric.
pub fn check_series_with_metric(cfg: &VConfiguration, metric: &Metric) -> Result<SeriesCheckReport> {
    check_series_with_form(cfg, metric.checked(cfg)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentScalar {
    pub scalar: Rational,
    /// Basis of the eigenspace in `V` (columns).
    pub basis: Vec<Vec<Rational>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CmsToVee {
    pub is_trig_vee: bool,
    pub components: Vec<ComponentScalar>,
    /// On each component the form `G` equals the scalar times the metric on `V`.
    pub restrictions_consistent: bool,
}

/// Coefficients `[c0, c1, ..., cn]` of `det(t I - x)`, by Faddeev-LeVerrier.
pub fn characteristic_polynomial(x: &RatMatrix) -> Vec<Rational> {
    let n = x.rows();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut m = RatMatrix::zeros(n, n);
    let id = RatMatrix::identity(n);
    for k in 1..=n {
        m = &(x * &m) + &id.scale(&coeffs[n - k + 1]);
        let xm = x * &m;
        let trace = (0..n).fold(Rational::zero(), |acc, i| acc + &xm[(i, i)]);
        coeffs[n - k] = -trace / Rational::from_integer(BigInt::from(k));
    }
    coeffs
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            small.push(d.clone());
            let other = &n / &d;
            if other != d {
                large.push(other);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Distinct rational roots of a polynomial with rational coefficients
/// (lowest degree first), in increasing order.
pub fn rational_roots(coeffs: &[Rational]) -> Vec<Rational> {
    let scale = Rational::from_integer(common_denominator(coeffs));
    let mut ints: Vec<BigInt> = coeffs.iter().map(|c| (c * &scale).to_integer()).collect();
    while ints.last().is_some_and(Zero::is_zero) {
        ints.pop();
    }
    let mut roots = Vec::new();
    if ints.is_empty() {
        return roots;
    }
    if ints[0].is_zero() {
        roots.push(Rational::zero());
        while ints.first().is_some_and(Zero::is_zero) {
            ints.remove(0);
        }
    }
    let eval = |r: &Rational| {
        ints.iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * r + Rational::from_integer(c.clone()))
    };
    let lead = ints.last().cloned().unwrap_or_default();
    for p in divisors(&ints[0]) {
        for q in divisors(&lead) {
            if !p.gcd(&q).is_one() {
                continue;
            }
            for sign in [1, -1] {
                let r = Rational::new(&p * BigInt::from(sign), q.clone());
                if eval(&r).is_zero() && !roots.contains(&r) {
                    roots.push(r);
                }
            }
        }
    }
    roots.sort();
    roots
}

/// Splits `V` into eigenspaces of `X = M G` (`M` the metric, `G` the form of
/// the configuration) and checks that `G` restricts to a scalar multiple of
/// the metric on `V` on each of them.
pub fn cms_to_vee(cfg: &VConfiguration, metric: &Metric) -> Result<CmsToVee> {
    let m = metric.checked(cfg)?;
    let n = cfg.dim();
    let x = m * cfg.gram();
    let metric_on_v = mat_inverse(m)?;
    let mut components = Vec::new();
    let mut total = 0;
    for mu in rational_roots(&characteristic_polynomial(&x)) {
        let shifted = &x - &RatMatrix::identity(n).scale(&mu);
        let basis = shifted.kernel();
        total += basis.len();
        components.push(ComponentScalar { scalar: mu, basis });
    }
    if total != n {
        return Err(Error::NonScalarAction);
    }
    let restrictions_consistent = components.iter().all(|comp| {
        comp.basis.iter().all(|u| {
            comp.basis.iter().all(|v| {
                cfg.gram().bilinear(u, v) == &comp.scalar * metric_on_v.bilinear(u, v)
            })
        })
    });
    let is_trig_vee = check_series_condition(cfg)?.pass;
    Ok(CmsToVee {
        is_trig_vee,
        components,
        restrictions_consistent,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CapitalLambda {
    Value(Rational),
    Any,
    NoSolution,
}

/// Solves `sum (L (a, b) - 1) c_a c_b B_ab (x) B_ab = 0` for `L` with the
/// metric's pairing.
pub fn solve_capital_lambda(cfg: &VConfiguration, metric: &Metric, psys: &PositiveSystem) -> Result<CapitalLambda> {
    let (p, q) = coupling_tensors(cfg, metric.checked(cfg)?, psys);
    Ok(match solve_proportionality(&p, &q) {
        Proportionality::Value(k) => CapitalLambda::Value(k),
        Proportionality::Any => CapitalLambda::Any,
        Proportionality::NoSolution(_) => CapitalLambda::NoSolution,
    })
}
