//! Multiplicities as unknowns.
//!
//! The series condition is rational in the multiplicities through `G^{-1}`.
//! Multiplying through by `det G` and writing `det(G) G^{-1} = adj(G)` turns
//! each `(base, series)` pair into a polynomial constraint, homogeneous of
//! degree `dim` when every multiplicity is a symbol.

mod poly;
mod search;

pub use poly::{parse_rational_function, ExprError, Monomial, MultiPoly, RationalFunction};
pub use search::{find_multiplicities, SearchOptions};

use num_traits::{One, Zero};

use crate::config::{alpha_series, build_configuration, Covector, Entry, VConfiguration};
use crate::error::{Error, Result};
use crate::exactnum::{ring_adjugate, ring_det, RatMatrix, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SymMult {
    Value(Rational),
    Symbol(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicEntry {
    pub covector: Covector,
    pub mult: SymMult,
}

/// Covectors whose multiplicities are symbols or fixed rationals. Several
/// entries may share one symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicSystem {
    dim: usize,
    entries: Vec<SymbolicEntry>,
    vars: Vec<String>,
    /// The same covectors with unit multiplicities; carries the lattice.
    skeleton: VConfiguration,
}

impl SymbolicSystem {
    pub fn new(dim: usize, entries: Vec<SymbolicEntry>) -> Result<Self> {
        let mut vars: Vec<String> = Vec::new();
        for (i, e) in entries.iter().enumerate() {
            match &e.mult {
                SymMult::Symbol(s) if !vars.contains(s) => vars.push(s.clone()),
                SymMult::Value(q) if q.is_zero() => return Err(Error::ZeroMultiplicity(i)),
                _ => {}
            }
        }
        let skeleton = build_configuration(
            dim,
            entries
                .iter()
                .map(|e| Entry::new(e.covector.clone(), Rational::one(), ""))
                .collect(),
        )?;
        Ok(SymbolicSystem {
            dim,
            entries,
            vars,
            skeleton,
        })
    }

    /// One fresh symbol `c1, c2, ...` per covector.
    pub fn distinct(dim: usize, covectors: Vec<Covector>) -> Result<Self> {
        let entries = covectors
            .into_iter()
            .enumerate()
            .map(|(i, covector)| SymbolicEntry {
                covector,
                mult: SymMult::Symbol(format!("c{}", i + 1)),
            })
            .collect();
        Self::new(dim, entries)
    }

    /// Entries paired with symbol names; a shared name means a shared unknown.
    pub fn with_symbols(dim: usize, entries: &[(Covector, &str)]) -> Result<Self> {
        Self::new(
            dim,
            entries
                .iter()
                .map(|(c, s)| SymbolicEntry {
                    covector: c.clone(),
                    mult: SymMult::Symbol(s.to_string()),
                })
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[SymbolicEntry] {
        &self.entries
    }

    /// Distinct symbols in order of first appearance.
    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn mult_poly(&self, i: usize) -> MultiPoly {
        match &self.entries[i].mult {
            SymMult::Value(q) => MultiPoly::constant(&self.vars, q.clone()),
            SymMult::Symbol(s) => {
                let k = self.vars.iter().position(|v| v == s).expect("symbol registered");
                MultiPoly::var(&self.vars, k)
            }
        }
    }

    pub fn gram(&self) -> Vec<Vec<MultiPoly>> {
        let n = self.dim;
        let mut g = vec![vec![MultiPoly::zero(&self.vars); n]; n];
        for (i, e) in self.entries.iter().enumerate() {
            let c = self.mult_poly(i);
            let a = e.covector.coords();
            for r in 0..n {
                for s in 0..n {
                    let w = &a[r] * &a[s];
                    if !w.is_zero() {
                        g[r][s] = &g[r][s] + &c.scale(&w);
                    }
                }
            }
        }
        g
    }

    /// Concrete configuration with `values[k]` for the `k`-th symbol.
    pub fn instantiate(&self, values: &[Rational]) -> Result<VConfiguration> {
        if values.len() != self.vars.len() {
            return Err(Error::DimensionMismatch {
                expected: self.vars.len(),
                found: values.len(),
            });
        }
        let entries = self
            .entries
            .iter()
            .enumerate()
            .map(|(i, e)| Entry::new(e.covector.clone(), self.mult_poly(i).eval(values), format!("a{}", i + 1)))
            .collect();
        build_configuration(self.dim, entries)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesConstraint {
    pub base: usize,
    pub series_index: usize,
    pub members: Vec<usize>,
    pub poly: MultiPoly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintSet {
    pub vars: Vec<String>,
    /// Only the constraints that are not identically zero.
    pub constraints: Vec<SeriesConstraint>,
    /// `det G` as a polynomial in the symbols.
    pub nondegeneracy: MultiPoly,
}

impl ConstraintSet {
    pub fn polynomials(&self) -> impl Iterator<Item = &MultiPoly> {
        self.constraints.iter().map(|c| &c.poly)
    }

    /// All constraints vanish and the form is nondegenerate.
    pub fn is_satisfied_at(&self, values: &[Rational]) -> bool {
        !self.nondegeneracy.eval(values).is_zero() && self.polynomials().all(|p| p.eval(values).is_zero())
    }

    /// The distinct constraints up to scalar multiples.
    pub fn distinct_polynomials(&self) -> Vec<MultiPoly> {
        let mut out: Vec<MultiPoly> = Vec::new();
        for p in self.polynomials() {
            let m = p.monic();
            if !out.contains(&m) {
                out.push(m);
            }
        }
        out
    }
}

/// Polynomial series constraints `sum sign_b c_b a adj(G) b^T` for every
/// base `a` and every `a`-series.
pub fn series_constraints(sys: &SymbolicSystem) -> Result<ConstraintSet> {
    let rows: Vec<Vec<Rational>> = sys.entries.iter().map(|e| e.covector.0.clone()).collect();
    if rows.is_empty() || RatMatrix::from_rows(rows)?.rank() < sys.dim {
        return Err(Error::SpanDeficient);
    }
    let gram = sys.gram();
    let one = MultiPoly::constant(&sys.vars, Rational::one());
    let adj = ring_adjugate(&gram, &one);
    let nondegeneracy = ring_det(&gram, &one);

    let n = sys.dim;
    let pairing = |a: &Covector, b: &Covector| {
        let mut acc = MultiPoly::zero(&sys.vars);
        for r in 0..n {
            if a.0[r].is_zero() {
                continue;
            }
            for s in 0..n {
                let w = &a.0[r] * &b.0[s];
                if !w.is_zero() {
                    acc = &acc + &adj[r][s].scale(&w);
                }
            }
        }
        acc
    };

    let mut constraints = Vec::new();
    for base in 0..sys.entries.len() {
        let alpha = &sys.entries[base].covector;
        for (series_index, series) in alpha_series(&sys.skeleton, base)?.into_iter().enumerate() {
            let mut poly = MultiPoly::zero(&sys.vars);
            for m in &series.members {
                let term = &sys.mult_poly(m.index) * &pairing(alpha, &sys.entries[m.index].covector);
                poly = if m.sign > 0 { &poly + &term } else { &poly - &term };
            }
            if !poly.is_zero() {
                constraints.push(SeriesConstraint {
                    base,
                    series_index,
                    members: series.indices(),
                    poly,
                });
            }
        }
    }
    Ok(ConstraintSet {
        vars: sys.vars.clone(),
        constraints,
        nondegeneracy,
    })
}

/// Rational functions of the parameters, one per symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parametrization {
    pub params: Vec<String>,
    pub values: Vec<(String, RationalFunction)>,
}

impl Parametrization {
    /// Parses `symbol = expression` assignments over the given parameters.
    pub fn parse(params: &[&str], assignments: &[(&str, &str)]) -> std::result::Result<Self, ExprError> {
        let params: Vec<String> = params.iter().map(|s| s.to_string()).collect();
        let values = assignments
            .iter()
            .map(|(s, e)| Ok((s.to_string(), parse_rational_function(e, &params)?)))
            .collect::<std::result::Result<_, ExprError>>()?;
        Ok(Parametrization { params, values })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyReport {
    pub pass: bool,
    /// Constraints that do not vanish identically, as cleared polynomials in
    /// the parameters: `(index into constraints, residual)`.
    pub failures: Vec<(usize, MultiPoly)>,
    /// Nondegeneracy after substitution, with denominators cleared.
    pub nondegeneracy: MultiPoly,
    /// Denominators of the parametrization; the family is undefined where
    /// any of them vanishes.
    pub denominators: Vec<(String, MultiPoly)>,
}

/// Substitutes `c_i = nums[i] / dens[i]` and multiplies by
/// `prod dens[i]^{deg_i p}`, giving a polynomial with the same zero set
/// away from the denominators.
fn clear_substitute(p: &MultiPoly, nums: &[MultiPoly], dens: &[MultiPoly], params: &[String]) -> MultiPoly {
    let max_deg: Vec<u32> = (0..nums.len()).map(|i| p.degree_in(i)).collect();
    let mut out = MultiPoly::zero(params);
    for (m, c) in p.terms() {
        let mut t = MultiPoly::constant(params, c.clone());
        for i in 0..nums.len() {
            let e = m.0[i];
            if e > 0 {
                t = &t * &nums[i].pow(e);
            }
            if max_deg[i] > e {
                t = &t * &dens[i].pow(max_deg[i] - e);
            }
        }
        out = &out + &t;
    }
    out
}

/// Checks exactly that every constraint vanishes identically on the family.
pub fn verify_family(cs: &ConstraintSet, param: &Parametrization) -> Result<FamilyReport> {
    let mut nums = Vec::with_capacity(cs.vars.len());
    let mut dens = Vec::with_capacity(cs.vars.len());
    for (sym, _) in &param.values {
        if !cs.vars.contains(sym) {
            return Err(Error::InvalidParams(format!("{sym} is not a multiplicity symbol")));
        }
    }
    let mut denominators = Vec::new();
    for v in &cs.vars {
        let (_, f) = param
            .values
            .iter()
            .find(|(s, _)| s == v)
            .ok_or_else(|| Error::InvalidParams(format!("no value given for {v}")))?;
        if f.vars() != param.params.as_slice() {
            return Err(Error::InvalidParams(format!("value of {v} uses other parameters")));
        }
        if f.den.is_zero() {
            return Err(Error::ZeroDenominator(v.clone()));
        }
        if f.den.as_constant().is_none() {
            denominators.push((v.clone(), f.den.clone()));
        }
        nums.push(f.num.clone());
        dens.push(f.den.clone());
    }
    let nondegeneracy = clear_substitute(&cs.nondegeneracy, &nums, &dens, &param.params);
    if nondegeneracy.is_zero() {
        return Err(Error::DegenerateParametrization);
    }
    let failures: Vec<(usize, MultiPoly)> = cs
        .constraints
        .iter()
        .enumerate()
        .map(|(k, c)| (k, clear_substitute(&c.poly, &nums, &dens, &param.params)))
        .filter(|(_, r)| !r.is_zero())
        .collect();
    Ok(FamilyReport {
        pass: failures.is_empty(),
        failures,
        nondegeneracy,
        denominators,
    })
}
