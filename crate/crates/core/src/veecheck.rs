//! Exact decision procedures for the trigonometric vee-conditions.
//!
//! The series condition asks that for every covector `a` and every
//! `a`-series `S`, `sum_{b in S} c_b (a, b) a^b = 0`. Since all members of a
//! series satisfy `a^b = +-(a^b0)` for the series representative `b0`, each
//! condition reduces to one rational residual.
//!
//! The coupling condition is a linear identity in `lambda^2` between two
//! tensors on `L2 (x) L2`, `L2 = Lambda^2 V*`, represented as square arrays
//! over the ordered basis `e^i ^ e^j`, `i < j`.

use num_traits::Zero;

use crate::config::{
    alpha_series, component_indices, positive_system, Covector, PositiveSystem, VConfiguration,
};
use crate::error::{Error, Result};
use crate::exactnum::{int, RatMatrix, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesResidual {
    pub base: usize,
    pub series_index: usize,
    pub members: Vec<usize>,
    /// Coefficient of `a ^ b0` in `sum c_b (a, b) a ^ b`.
    pub residual: Rational,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesCheckReport {
    pub residuals: Vec<SeriesResidual>,
    pub pass: bool,
}

impl SeriesCheckReport {
    pub fn failures(&self) -> impl Iterator<Item = &SeriesResidual> {
        self.residuals.iter().filter(|r| !r.pass)
    }
}

/// Series condition with `(a, b)` taken from an arbitrary symmetric form on
/// `V*` (an `n x n` matrix in the coordinates of the covectors).
pub fn check_series_with_form(cfg: &VConfiguration, form: &RatMatrix) -> Result<SeriesCheckReport> {
    let mut residuals = Vec::new();
    for base in 0..cfg.len() {
        let alpha = cfg.covector(base).coords();
        for (series_index, s) in alpha_series(cfg, base)?.into_iter().enumerate() {
            let residual = s.members.iter().fold(Rational::zero(), |acc, m| {
                let term = cfg.mult(m.index) * form.bilinear(alpha, cfg.covector(m.index).coords());
                if m.sign > 0 {
                    acc + term
                } else {
                    acc - term
                }
            });
            residuals.push(SeriesResidual {
                base,
                series_index,
                members: s.indices(),
                pass: residual.is_zero(),
                residual,
            });
        }
    }
    let pass = residuals.iter().all(|r| r.pass);
    Ok(SeriesCheckReport { residuals, pass })
}

pub fn check_series_condition(cfg: &VConfiguration) -> Result<SeriesCheckReport> {
    check_series_with_form(cfg, cfg.vee_form()?)
}

/// A mismatching component of the two coupling tensors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorWitness {
    pub row: usize,
    pub col: usize,
    pub p: Rational,
    pub q: Rational,
}

/// Outcome of solving `k * P = Q` for the scalar `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Proportionality {
    Value(Rational),
    /// `P = Q = 0`: every coupling satisfies the identity.
    Any,
    NoSolution(TensorWitness),
}

/// The tensors `P = sum c_a c_b (a, b) (a^b) (x) (a^b)` and
/// `Q = sum c_a c_b (a^b) (x) (a^b)` over ordered pairs of a positive system.
pub fn coupling_tensors(
    cfg: &VConfiguration,
    form: &RatMatrix,
    psys: &PositiveSystem,
) -> (RatMatrix, RatMatrix) {
    let n = cfg.dim();
    let m = n * n.saturating_sub(1) / 2;
    let mut p = RatMatrix::zeros(m, m);
    let mut q = RatMatrix::zeros(m, m);
    let signed: Vec<Covector> = (0..cfg.len()).map(|i| psys.signed(cfg, i)).collect();
    // the summand is symmetric in (a, b), so unordered pairs count twice
    for i in 0..signed.len() {
        for j in i + 1..signed.len() {
            let w = signed[i].wedge(&signed[j]);
            if w.iter().all(Zero::is_zero) {
                continue;
            }
            let cc = cfg.mult(i) * cfg.mult(j) * int(2);
            let pairing = form.bilinear(signed[i].coords(), signed[j].coords());
            let cp = &cc * &pairing;
            for r in 0..m {
                if w[r].is_zero() {
                    continue;
                }
                for c in 0..m {
                    let ww = &w[r] * &w[c];
                    q[(r, c)] += &cc * &ww;
                    if !cp.is_zero() {
                        p[(r, c)] += &cp * &ww;
                    }
                }
            }
        }
    }
    (p, q)
}

/// Solves `k * P = Q` exactly.
pub fn solve_proportionality(p: &RatMatrix, q: &RatMatrix) -> Proportionality {
    let m = p.rows();
    let cells = || (0..m).flat_map(move |r| (0..m).map(move |c| (r, c)));
    let Some((r0, c0)) = cells().find(|&(r, c)| !p[(r, c)].is_zero()) else {
        return match cells().find(|&(r, c)| !q[(r, c)].is_zero()) {
            None => Proportionality::Any,
            Some((row, col)) => Proportionality::NoSolution(TensorWitness {
                row,
                col,
                p: Rational::zero(),
                q: q[(row, col)].clone(),
            }),
        };
    };
    let k = &q[(r0, c0)] / &p[(r0, c0)];
    match cells().find(|&(r, c)| &k * &p[(r, c)] != q[(r, c)]) {
        None => Proportionality::Value(k),
        Some((row, col)) => Proportionality::NoSolution(TensorWitness {
            row,
            col,
            p: p[(row, col)].clone(),
            q: q[(row, col)].clone(),
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LambdaSquared {
    Value(Rational),
    /// Both tensors vanish; flagged as degenerate.
    AnyLambda,
    NoSolution(TensorWitness),
}

impl LambdaSquared {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            LambdaSquared::Value(v) => Some(v),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaSolution {
    pub lambda_squared: LambdaSquared,
    pub positive_system: PositiveSystem,
}

/// Finds `lambda^2` with `(lambda^2 / 4) P = Q`.
pub fn solve_lambda_squared(cfg: &VConfiguration, psys: &PositiveSystem) -> Result<LambdaSolution> {
    let (p, q) = coupling_tensors(cfg, cfg.vee_form()?, psys);
    let lambda_squared = match solve_proportionality(&p, &q) {
        Proportionality::Value(k) => LambdaSquared::Value(k * int(4)),
        Proportionality::Any => LambdaSquared::AnyLambda,
        Proportionality::NoSolution(w) => LambdaSquared::NoSolution(w),
    };
    Ok(LambdaSolution {
        lambda_squared,
        positive_system: psys.clone(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoFormCheck {
    pub base: usize,
    /// Components of `sum_b c_b (a, b) a ^ b`.
    pub form: Vec<Rational>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct V3Report {
    pub checks: Vec<TwoFormCheck>,
    pub pass: bool,
}

/// For each `a`, checks `sum_b c_b (a, b) a ^ b = 0`.
pub fn check_v3_identity(cfg: &VConfiguration) -> Result<V3Report> {
    let form = cfg.vee_form()?;
    let m = cfg.dim() * cfg.dim().saturating_sub(1) / 2;
    let checks: Vec<TwoFormCheck> = (0..cfg.len())
        .map(|a| {
            let alpha = cfg.covector(a);
            let mut acc = vec![Rational::zero(); m];
            for b in 0..cfg.len() {
                let beta = cfg.covector(b);
                let k = cfg.mult(b) * form.bilinear(alpha.coords(), beta.coords());
                if k.is_zero() {
                    continue;
                }
                for (x, w) in acc.iter_mut().zip(alpha.wedge(beta)) {
                    *x += &k * w;
                }
            }
            let pass = acc.iter().all(Zero::is_zero);
            TwoFormCheck { base: a, form: acc, pass }
        })
        .collect();
    let pass = checks.iter().all(|c| c.pass);
    Ok(V3Report { checks, pass })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaneCheck {
    pub base: usize,
    /// Entries lying in the plane through `a` and the first listed non-parallel entry.
    pub plane: Vec<usize>,
    /// `sum_{b in plane} c_b (a, b) b`.
    pub sum: Vec<Rational>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalVeeReport {
    pub checks: Vec<PlaneCheck>,
    pub pass: bool,
}

fn in_span(vectors: &[&Covector], v: &Covector) -> bool {
    let mut rows: Vec<Vec<Rational>> = vectors.iter().map(|c| c.0.clone()).collect();
    let before = RatMatrix::from_rows(rows.clone()).map_or(0, |m| m.rank());
    rows.push(v.0.clone());
    let after = RatMatrix::from_rows(rows).map_or(0, |m| m.rank());
    before == after
}

/// In every 2-plane through `a`, checks that `sum c_b (a, b) b` is
/// proportional to `a`.
pub fn check_rational_vee(cfg: &VConfiguration) -> Result<RationalVeeReport> {
    let form = cfg.vee_form()?;
    let mut checks = Vec::new();
    for a in 0..cfg.len() {
        let alpha = cfg.covector(a);
        let mut covered = vec![false; cfg.len()];
        for b in 0..cfg.len() {
            if covered[b] || alpha.is_parallel(cfg.covector(b)) {
                continue;
            }
            let plane: Vec<usize> = (0..cfg.len())
                .filter(|&g| in_span(&[alpha, cfg.covector(b)], cfg.covector(g)))
                .collect();
            for &g in &plane {
                covered[g] = true;
            }
            let mut sum = vec![Rational::zero(); cfg.dim()];
            for &g in &plane {
                let beta = cfg.covector(g);
                let k = cfg.mult(g) * form.bilinear(alpha.coords(), beta.coords());
                for (x, y) in sum.iter_mut().zip(beta.coords()) {
                    *x += &k * y;
                }
            }
            let pass = alpha.wedge(&Covector(sum.clone())).iter().all(Zero::is_zero);
            checks.push(PlaneCheck { base: a, plane, sum, pass });
        }
    }
    let pass = checks.iter().all(|c| c.pass);
    Ok(RationalVeeReport { checks, pass })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FullReport {
    pub nondegenerate: bool,
    pub series: Option<SeriesCheckReport>,
    pub is_trig_vee: bool,
    pub is_irreducible: Option<bool>,
    pub lambda: Option<LambdaSolution>,
    /// Series condition holds and a coupling exists.
    pub defines_solution: bool,
    pub failure: Option<String>,
}

/// Runs every exact check; failures are reported rather than returned.
pub fn full_check(cfg: &VConfiguration) -> FullReport {
    if !cfg.is_nondegenerate() {
        return FullReport {
            nondegenerate: false,
            series: None,
            is_trig_vee: false,
            is_irreducible: None,
            lambda: None,
            defines_solution: false,
            failure: Some(Error::DegenerateForm.to_string()),
        };
    }
    let run = || -> Result<FullReport> {
        let series = check_series_condition(cfg)?;
        let is_irreducible = component_indices(cfg)?.len() == 1;
        let psys = positive_system(cfg, None)?;
        let lambda = solve_lambda_squared(cfg, &psys)?;
        let has_coupling = !matches!(lambda.lambda_squared, LambdaSquared::NoSolution(_));
        let failure = if !series.pass {
            Some("series condition fails".to_string())
        } else if !has_coupling {
            Some("no coupling satisfies the tensor identity".to_string())
        } else {
            None
        };
        Ok(FullReport {
            nondegenerate: true,
            is_trig_vee: series.pass,
            defines_solution: series.pass && has_coupling,
            series: Some(series),
            is_irreducible: Some(is_irreducible),
            lambda: Some(lambda),
            failure,
        })
    };
    run().unwrap_or_else(|e| FullReport {
        nondegenerate: true,
        series: None,
        is_trig_vee: false,
        is_irreducible: None,
        lambda: None,
        defines_solution: false,
        failure: Some(e.to_string()),
    })
}

/// `lambda^2` for each orientation functional in turn.
pub fn lambda_squared_across(
    cfg: &VConfiguration,
    functionals: &[Vec<Rational>],
) -> Result<Vec<LambdaSquared>> {
    functionals
        .iter()
        .map(|f| {
            let ps = positive_system(cfg, Some(f))?;
            Ok(solve_lambda_squared(cfg, &ps)?.lambda_squared)
        })
        .collect()
}
