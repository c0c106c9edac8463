//! Covector configurations with multiplicities.
//!
//! A [`VConfiguration`] caches the form `G = sum c_a a^T a` on `V`, its
//! inverse (the induced product on `V*`) when it exists, and the lattice
//! generated by the covectors.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{dot, fmt_rational, hnf_basis, int, mat_inverse, LatticeBasis, RatMatrix, Rational};

/// A row of rational coordinates in `V*`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Covector(pub Vec<Rational>);

impl Covector {
    pub fn from_ints(coords: &[i64]) -> Self {
        Covector(coords.iter().map(|&x| int(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn neg(&self) -> Covector {
        Covector(self.0.iter().map(|x| -x).collect())
    }

    pub fn scaled(&self, k: &Rational) -> Covector {
        Covector(self.0.iter().map(|x| x * k).collect())
    }

    pub fn sub(&self, other: &Covector) -> Covector {
        Covector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn add(&self, other: &Covector) -> Covector {
        Covector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// The `k` with `other = k * self`, if any.
    pub fn ratio_of(&self, other: &Covector) -> Option<Rational> {
        let pivot = self.0.iter().position(|x| !x.is_zero())?;
        let k = &other.0[pivot] / &self.0[pivot];
        self.0
            .iter()
            .zip(&other.0)
            .all(|(a, b)| a * &k == *b)
            .then_some(k)
    }

    pub fn is_parallel(&self, other: &Covector) -> bool {
        self.ratio_of(other).is_some()
    }

    /// Components of `self ^ other` on `e^i ^ e^j`, `i < j`, in lexicographic
    /// order.
    pub fn wedge(&self, other: &Covector) -> Vec<Rational> {
        let n = self.dim();
        let mut out = Vec::with_capacity(n * (n.saturating_sub(1)) / 2);
        for i in 0..n {
            for j in i + 1..n {
                out.push(&self.0[i] * &other.0[j] - &self.0[j] * &other.0[i]);
            }
        }
        out
    }
}

impl fmt::Debug for Covector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(fmt_rational).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl fmt::Display for Covector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub covector: Covector,
    pub mult: Rational,
    pub label: String,
}

impl Entry {
    pub fn new(covector: Covector, mult: Rational, label: impl Into<String>) -> Self {
        Entry {
            covector,
            mult,
            label: label.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VConfiguration {
    dim: usize,
    entries: Vec<Entry>,
    gram: RatMatrix,
    gram_det: Rational,
    gram_inv: Option<RatMatrix>,
    lattice: LatticeBasis,
    lattice_coords: Vec<Vec<BigInt>>,
}

/// Assembles a configuration, computing and caching the form and lattice.
pub fn build_configuration(dim: usize, entries: Vec<Entry>) -> Result<VConfiguration> {
    for (i, e) in entries.iter().enumerate() {
        if e.covector.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: e.covector.dim(),
            });
        }
        if e.covector.is_zero() {
            return Err(Error::ZeroCovector(i));
        }
        if e.mult.is_zero() {
            return Err(Error::ZeroMultiplicity(i));
        }
        for (j, prev) in entries[..i].iter().enumerate() {
            if prev.covector == e.covector || prev.covector == e.covector.neg() {
                return Err(Error::DuplicateCovector(j, i));
            }
        }
    }

    let mut gram = RatMatrix::zeros(dim, dim);
    for e in &entries {
        let a = e.covector.coords();
        for r in 0..dim {
            if a[r].is_zero() {
                continue;
            }
            let ca = &e.mult * &a[r];
            for c in 0..dim {
                gram[(r, c)] += &ca * &a[c];
            }
        }
    }
    let gram_det = gram.determinant()?;
    let gram_inv = if gram_det.is_zero() {
        None
    } else {
        Some(mat_inverse(&gram)?)
    };

    let rows: Vec<Vec<Rational>> = entries.iter().map(|e| e.covector.0.clone()).collect();
    let lattice = hnf_basis(&rows);
    let lattice_coords = rows
        .iter()
        .map(|r| {
            lattice
                .coordinates(r)
                .expect("generators lie in the lattice they generate")
        })
        .collect();

    Ok(VConfiguration {
        dim,
        entries,
        gram,
        gram_det,
        gram_inv,
        lattice,
        lattice_coords,
    })
}

impl VConfiguration {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn entry(&self, i: usize) -> Result<&Entry> {
        self.entries.get(i).ok_or(Error::IndexOutOfRange(i))
    }

    pub fn covector(&self, i: usize) -> &Covector {
        &self.entries[i].covector
    }

    pub fn mult(&self, i: usize) -> &Rational {
        &self.entries[i].mult
    }

    pub fn gram(&self) -> &RatMatrix {
        &self.gram
    }

    pub fn gram_det(&self) -> &Rational {
        &self.gram_det
    }

    pub fn is_nondegenerate(&self) -> bool {
        !self.gram_det.is_zero()
    }

    /// The induced product on `V*`, i.e. `G^{-1}`.
    pub fn vee_form(&self) -> Result<&RatMatrix> {
        self.gram_inv.as_ref().ok_or(Error::DegenerateForm)
    }

    pub fn lattice(&self) -> &LatticeBasis {
        &self.lattice
    }

    pub fn lattice_coords(&self, i: usize) -> &[BigInt] {
        &self.lattice_coords[i]
    }

    /// Rebuilds with the same covectors and new multiplicities.
    pub fn with_mults(&self, mults: &[Rational]) -> Result<VConfiguration> {
        assert_eq!(mults.len(), self.len(), "multiplicity count mismatch");
        let entries = self
            .entries
            .iter()
            .zip(mults)
            .map(|(e, m)| Entry::new(e.covector.clone(), m.clone(), e.label.clone()))
            .collect();
        build_configuration(self.dim, entries)
    }

    /// All multiplicities multiplied by `t`.
    pub fn scale_mults(&self, t: &Rational) -> Result<VConfiguration> {
        let mults: Vec<Rational> = self.entries.iter().map(|e| &e.mult * t).collect();
        self.with_mults(&mults)
    }

    /// Replaces entry `i` by its negative.
    pub fn negate_entry(&self, i: usize) -> Result<VConfiguration> {
        self.entry(i)?;
        let mut entries = self.entries.clone();
        entries[i].covector = entries[i].covector.neg();
        build_configuration(self.dim, entries)
    }

    /// Applies the linear change of variables `a -> a * t` to every covector.
    pub fn transform(&self, t: &RatMatrix) -> Result<VConfiguration> {
        if t.rows() != self.dim || !t.is_square() {
            return Err(Error::ShapeMismatch("transform must be dim x dim".into()));
        }
        let tt = t.transpose();
        let entries = self
            .entries
            .iter()
            .map(|e| Entry::new(Covector(tt.mul_vec(e.covector.coords())), e.mult.clone(), e.label.clone()))
            .collect();
        build_configuration(self.dim, entries)
    }
}

/// Solves `G x = v^T`.
pub fn dual_vector(cfg: &VConfiguration, v: &Covector) -> Result<Vec<Rational>> {
    Ok(cfg.vee_form()?.mul_vec(v.coords()))
}

/// The induced product `(u, v) = u G^{-1} v^T` on `V*`.
pub fn vee_product(cfg: &VConfiguration, u: &Covector, v: &Covector) -> Result<Rational> {
    Ok(cfg.vee_form()?.bilinear(u.coords(), v.coords()))
}

/// A choice of signs putting every covector in an open half-space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositiveSystem {
    pub signs: Vec<i8>,
    pub functional: Vec<Rational>,
}

impl PositiveSystem {
    pub fn signed(&self, cfg: &VConfiguration, i: usize) -> Covector {
        if self.signs[i] < 0 {
            cfg.covector(i).neg()
        } else {
            cfg.covector(i).clone()
        }
    }
}

fn pair(functional: &[Rational], v: &Covector) -> Rational {
    dot(functional, v.coords())
}

/// The default orientation functional `(1, t, t^2, ...)` with the smallest
/// positive integer `t` that vanishes on no covector.
pub fn default_functional(cfg: &VConfiguration) -> Vec<Rational> {
    let mut t = 1i64;
    loop {
        let mut row = Vec::with_capacity(cfg.dim());
        let mut p = Rational::one();
        for _ in 0..cfg.dim() {
            row.push(p.clone());
            p *= int(t);
        }
        if cfg.entries().iter().all(|e| !pair(&row, &e.covector).is_zero()) {
            return row;
        }
        t += 1;
    }
}

pub fn positive_system(cfg: &VConfiguration, functional: Option<&[Rational]>) -> Result<PositiveSystem> {
    let functional = match functional {
        Some(f) => {
            if f.len() != cfg.dim() {
                return Err(Error::DimensionMismatch {
                    expected: cfg.dim(),
                    found: f.len(),
                });
            }
            f.to_vec()
        }
        None => default_functional(cfg),
    };
    let signs = cfg
        .entries()
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let v = pair(&functional, &e.covector);
            if v.is_zero() {
                Err(Error::FunctionalVanishes(i))
            } else if v.is_positive() {
                Ok(1)
            } else {
                Ok(-1)
            }
        })
        .collect::<Result<Vec<i8>>>()?;
    Ok(PositiveSystem { signs, functional })
}

/// One member of an alpha-series: `sign * beta + step * alpha = representative`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesMember {
    pub index: usize,
    pub sign: i8,
    pub step: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaSeries {
    pub base: usize,
    /// The first member is the representative (sign 1, step 0).
    pub members: Vec<SeriesMember>,
}

impl AlphaSeries {
    pub fn indices(&self) -> Vec<usize> {
        self.members.iter().map(|m| m.index).collect()
    }

    pub fn representative(&self) -> usize {
        self.members[0].index
    }
}

/// Integer `k` with `a - b = k * base` in lattice coordinates, if one exists.
fn integer_step(a: &[BigInt], b: &[BigInt], base: &[BigInt]) -> Option<BigInt> {
    let diff: Vec<BigInt> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let pivot = base.iter().position(|x| !x.is_zero())?;
    let (k, rem) = (&diff[pivot] / &base[pivot], &diff[pivot] % &base[pivot]);
    if !rem.is_zero() {
        return None;
    }
    diff.iter()
        .zip(base)
        .all(|(d, b)| *d == &k * b)
        .then_some(k)
}

/// Splits the entries not parallel to entry `base` into maximal
/// alpha-series, judged by integer steps in the configuration lattice.
pub fn alpha_series(cfg: &VConfiguration, base: usize) -> Result<Vec<AlphaSeries>> {
    cfg.entry(base)?;
    let alpha = cfg.covector(base);
    let alpha_coords = cfg.lattice_coords(base);
    let mut assigned = vec![false; cfg.len()];
    let mut out = Vec::new();
    for start in 0..cfg.len() {
        if assigned[start] || alpha.is_parallel(cfg.covector(start)) {
            continue;
        }
        assigned[start] = true;
        let rep = cfg.lattice_coords(start);
        let mut members = vec![SeriesMember {
            index: start,
            sign: 1,
            step: BigInt::zero(),
        }];
        for other in start + 1..cfg.len() {
            if assigned[other] || alpha.is_parallel(cfg.covector(other)) {
                continue;
            }
            let beta = cfg.lattice_coords(other);
            let neg: Vec<BigInt> = beta.iter().map(|x| -x).collect();
            // rep - beta = step * alpha  or  rep + beta = step * alpha
            let found = integer_step(rep, beta, alpha_coords)
                .map(|k| (1, k))
                .or_else(|| integer_step(rep, &neg, alpha_coords).map(|k| (-1, k)));
            if let Some((sign, step)) = found {
                assigned[other] = true;
                members.push(SeriesMember { index: other, sign, step });
            }
        }
        out.push(AlphaSeries { base, members });
    }
    Ok(out)
}

/// Index groups of the connected components of the graph joining entries
/// with nonzero product.
pub fn component_indices(cfg: &VConfiguration) -> Result<Vec<Vec<usize>>> {
    let form = cfg.vee_form()?;
    let n = cfg.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for i in 0..n {
        for j in i + 1..n {
            if !form.bilinear(cfg.covector(i).coords(), cfg.covector(j).coords()).is_zero() {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_slot: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        match root_slot[r] {
            Some(g) => groups[g].push(i),
            None => {
                root_slot[r] = Some(groups.len());
                groups.push(vec![i]);
            }
        }
    }
    Ok(groups)
}

/// Splits into irreducible pieces, each re-expressed in the lattice
/// coordinates of its own span.
pub fn decompose_components(cfg: &VConfiguration) -> Result<Vec<VConfiguration>> {
    component_indices(cfg)?
        .into_iter()
        .map(|group| {
            let rows: Vec<Vec<Rational>> = group.iter().map(|&i| cfg.covector(i).0.clone()).collect();
            let lat = hnf_basis(&rows);
            let entries = group
                .iter()
                .zip(&rows)
                .map(|(&i, r)| {
                    let coords = lat.coordinates(r).expect("generator lies in its lattice");
                    Entry::new(
                        Covector(coords.into_iter().map(Rational::from_integer).collect()),
                        cfg.mult(i).clone(),
                        cfg.entries()[i].label.clone(),
                    )
                })
                .collect();
            build_configuration(lat.rank(), entries)
        })
        .collect()
}

/// Direct sum of two configurations on `V1 + V2`.
pub fn direct_sum(a: &VConfiguration, b: &VConfiguration) -> Result<VConfiguration> {
    let dim = a.dim() + b.dim();
    let zeros = |k: usize| vec![Rational::zero(); k];
    let mut entries = Vec::with_capacity(a.len() + b.len());
    for e in a.entries() {
        let mut c = e.covector.0.clone();
        c.extend(zeros(b.dim()));
        entries.push(Entry::new(Covector(c), e.mult.clone(), e.label.clone()));
    }
    for e in b.entries() {
        let mut c = zeros(a.dim());
        c.extend(e.covector.0.iter().cloned());
        entries.push(Entry::new(Covector(c), e.mult.clone(), format!("{}'", e.label)));
    }
    build_configuration(dim, entries)
}
