//! Numeric search for rational multiplicities on a fixed set of covectors.
//!
//! Levenberg-Marquardt from seeded starts, then continued-fraction rounding
//! and an exact check. When the solution set has positive dimension a
//! converged point is generically irrational, so free symbols are pinned to
//! nearby simple rationals one at a time and the rest re-solved.

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{series_constraints, ConstraintSet, MultiPoly, SymbolicSystem};
use crate::error::{Error, Result};
use crate::exactnum::{to_f64, Rational};
use crate::veecheck::check_series_condition;

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOptions {
    pub starts: usize,
    pub max_iterations: usize,
    /// Largest constraint value (after scaling each polynomial to unit
    /// maximal coefficient) accepted before rounding.
    pub residual_tol: f64,
    pub max_denominator: u64,
    /// Denominator bound for values chosen when pinning a free symbol.
    pub pin_denominator: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            starts: 48,
            max_iterations: 400,
            residual_tol: 1e-10,
            max_denominator: 1_000_000,
            pin_denominator: 12,
        }
    }
}

/// Best continued-fraction convergent of `x` with denominator at most
/// `max_den`.
pub fn rationalize(x: f64, max_den: u64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        let ai = BigInt::from(a as i64);
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        if k2 > BigInt::from(max_den) {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = r - a;
        if frac.abs() < 1e-12 || (to_f64(&Rational::new(h1.clone(), k1.clone())) - x).abs() <= 1e-14 * x.abs().max(1.0) {
            break;
        }
        r = 1.0 / frac;
    }
    (!k1.is_zero()).then(|| Rational::new(h1, k1))
}

struct System {
    polys: Vec<MultiPoly>,
    grads: Vec<Vec<MultiPoly>>,
}

impl System {
    fn new(cs: &ConstraintSet) -> Self {
        let polys: Vec<MultiPoly> = cs
            .polynomials()
            .map(|p| p.scale(&p.max_coefficient().recip()))
            .collect();
        let grads = polys
            .iter()
            .map(|p| (0..cs.vars.len()).map(|i| p.derivative(i)).collect())
            .collect();
        System { polys, grads }
    }

    fn residual(&self, x: &[f64]) -> DVector<f64> {
        DVector::from_iterator(self.polys.len(), self.polys.iter().map(|p| p.eval_f64(x)))
    }

    /// Levenberg-Marquardt over the coordinates in `free`, others held fixed.
    fn solve(&self, mut x: Vec<f64>, free: &[usize], max_iterations: usize) -> Vec<f64> {
        if free.is_empty() || self.polys.is_empty() {
            return x;
        }
        let mut r = self.residual(&x);
        let mut cost = r.norm_squared();
        let mut damping = 1e-3;
        for _ in 0..max_iterations {
            if cost < 1e-30 {
                break;
            }
            let jac = DMatrix::from_fn(self.polys.len(), free.len(), |k, j| self.grads[k][free[j]].eval_f64(&x));
            let jtj = jac.transpose() * &jac;
            let g = jac.transpose() * &r;
            let mut improved = false;
            while damping < 1e12 {
                let mut a = jtj.clone();
                for i in 0..free.len() {
                    a[(i, i)] += damping * jtj[(i, i)].max(1e-9);
                }
                let Some(step) = a.lu().solve(&(-&g)) else {
                    damping *= 4.0;
                    continue;
                };
                let mut trial = x.clone();
                for (j, &i) in free.iter().enumerate() {
                    trial[i] += step[j];
                }
                let tr = self.residual(&trial);
                let tc = tr.norm_squared();
                if tc.is_finite() && tc < cost {
                    x = trial;
                    r = tr;
                    cost = tc;
                    damping = (damping / 3.0).max(1e-12);
                    improved = true;
                    break;
                }
                damping *= 4.0;
            }
            if !improved {
                break;
            }
        }
        x
    }

    fn max_residual(&self, x: &[f64]) -> f64 {
        self.residual(x).amax()
    }
}

struct Searcher<'a> {
    sys: &'a SymbolicSystem,
    cs: ConstraintSet,
    num: System,
    norm: usize,
    opts: &'a SearchOptions,
}

impl Searcher<'_> {
    fn certify(&self, x: &[f64], max_den: u64) -> Option<Vec<Rational>> {
        let q: Vec<Rational> = x
            .iter()
            .enumerate()
            .map(|(i, &v)| if i == self.norm { Some(Rational::one()) } else { rationalize(v, max_den) })
            .collect::<Option<_>>()?;
        if !self.cs.is_satisfied_at(&q) {
            return None;
        }
        let cfg = self.sys.instantiate(&q).ok()?;
        check_series_condition(&cfg).ok()?.pass.then_some(q)
    }

    fn converged(&self, x: &[f64]) -> bool {
        self.num.max_residual(x) <= self.opts.residual_tol && x.iter().all(|v| v.abs() >= 1e-6)
    }

    /// Small denominators first, then pinning, then the full bound.
    fn round(&self, x: Vec<f64>, mut free: Vec<usize>) -> Option<Vec<Rational>> {
        let simple = self.opts.pin_denominator * self.opts.pin_denominator;
        if let Some(q) = self.certify(&x, simple) {
            return Some(q);
        }
        let mut y = x.clone();
        while !free.is_empty() {
            // pin the free symbol closest to a simple rational
            let Some((pos, value)) = free
                .iter()
                .enumerate()
                .filter_map(|(pos, &i)| {
                    let r = rationalize(y[i], self.opts.pin_denominator)?;
                    let v = to_f64(&r);
                    (!r.is_zero()).then_some((pos, v, (v - y[i]).abs()))
                })
                .min_by(|a, b| a.2.total_cmp(&b.2))
                .map(|(pos, v, _)| (pos, v))
            else {
                break;
            };
            let i = free.remove(pos);
            y[i] = value;
            y = self.num.solve(y, &free, self.opts.max_iterations);
            if !self.converged(&y) {
                break;
            }
            if let Some(q) = self.certify(&y, simple) {
                return Some(q);
            }
        }
        self.certify(&x, self.opts.max_denominator)
    }

    fn run_start(&self, seed: u64, start: usize) -> Option<Vec<Rational>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(start as u64);
        let m = self.cs.vars.len();
        let mut x: Vec<f64> = (0..m)
            .map(|_| {
                let mag = (rng.random_range(0.2f64.ln()..5.0f64.ln())).exp();
                if rng.random_bool(0.75) { mag } else { -mag }
            })
            .collect();
        x[self.norm] = 1.0;
        let free: Vec<usize> = (0..m).filter(|&i| i != self.norm).collect();
        x = self.num.solve(x, &free, self.opts.max_iterations);
        if !self.converged(&x) {
            return None;
        }
        self.round(x, free)
    }
}

/// Searches for rational multiplicities with the symbol `normalization`
/// fixed to 1. Every returned assignment (one value per symbol, in the
/// order of `sys.vars()`) satisfies the series condition exactly. An empty
/// result only means nothing was found.
pub fn find_multiplicities(
    sys: &SymbolicSystem,
    normalization: &str,
    seed: u64,
    opts: &SearchOptions,
) -> Result<Vec<Vec<Rational>>> {
    let cs = series_constraints(sys)?;
    let norm = cs
        .vars
        .iter()
        .position(|v| v == normalization)
        .ok_or_else(|| Error::InvalidParams(format!("{normalization} is not a multiplicity symbol")))?;
    let searcher = Searcher {
        sys,
        num: System::new(&cs),
        cs,
        norm,
        opts,
    };
    let found: Vec<Option<Vec<Rational>>> = (0..opts.starts)
        .into_par_iter()
        .map(|start| searcher.run_start(seed, start))
        .collect();
    let mut out: Vec<Vec<Rational>> = Vec::new();
    for q in found.into_iter().flatten() {
        if !out.contains(&q) {
            out.push(q);
        }
    }
    Ok(out)
}
