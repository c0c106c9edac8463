//! Named configurations with known answers.
//!
//! Parametrized entries take their multiplicities from a name -> value map;
//! names not supplied keep their defaults. A name of the form `X+Y` is the
//! orthogonal direct sum of two entries at their defaults.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::config::{build_configuration, direct_sum, Covector, Entry, VConfiguration};
use crate::error::{Error, Result};
use crate::exactnum::{fmt_rational, int, rat, Rational};
use crate::polycon::SymbolicSystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Closed form or statement substituted at the parameters.
    Paper,
    /// Found and certified by this crate's own exact checks.
    Derived,
    Trivial,
}

impl Provenance {
    pub fn tag(self) -> &'static str {
        match self {
            Provenance::Paper => "PAPER",
            Provenance::Derived => "DERIVED",
            Provenance::Trivial => "TRIVIAL",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExpectedLambda {
    Value(Rational),
    NoSolution,
    NotRecorded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expected {
    pub is_trig_vee: bool,
    pub lambda_squared: ExpectedLambda,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: String,
    pub cfg: VConfiguration,
    pub expected: Option<Expected>,
    /// Parameter values actually used, defaults included.
    pub params: Vec<(String, Rational)>,
}

pub type Params = BTreeMap<String, Rational>;

const LIST: &[(&str, &str)] = &[
    ("A1", "single covector in dimension 1"),
    ("A2", "three covectors a, b, a+b with independent multiplicities"),
    ("A3", "root system A3, one multiplicity"),
    ("A4", "root system A4, one multiplicity"),
    ("B2", "e1, e2, e1+-e2; requires c1 = c2"),
    ("B3", "root system B3, short and long multiplicities"),
    ("B4", "root system B4, short and long multiplicities"),
    ("Prop4", "e1, 2e1, e2, e1+-e2; requires cp = cm and 2 d1 c2 = cp (c1 - c2)"),
    ("Prop5", "e1, e2, 2e2, (e1+-e2)/2, (e1+-3e2)/2 on the two-parameter family"),
    ("G2", "positive roots of G2, short and long multiplicities"),
    ("G2timesScaledA2", "G2 with its doubled short roots; short = 3 long"),
    ("TenVector", "e1, 2e1, e2, 2e2, e1+-e2, e1+-2e2, 2e1+-e2"),
    ("OrthogonalPair", "two orthogonal covectors; no solution"),
    ("A2+A2", "orthogonal sum of two A2 systems; no solution"),
    ("A2+B2", "orthogonal sum of A2 and B2; no solution"),
    ("A1+G2", "orthogonal sum of A1 and G2; no solution"),
];

/// Names in a fixed order, with one-line descriptions.
pub fn catalog_list() -> Vec<(&'static str, &'static str)> {
    LIST.to_vec()
}

struct Args<'a> {
    given: Option<&'a Params>,
    used: Vec<(String, Rational)>,
}

impl Args<'_> {
    fn take(&mut self, name: &str, default: Rational) -> Rational {
        let v = self
            .given
            .and_then(|p| p.get(name).cloned())
            .unwrap_or(default);
        self.used.push((name.to_string(), v.clone()));
        v
    }

    fn finish(&self) -> Result<()> {
        if let Some(p) = self.given {
            for k in p.keys() {
                if !self.used.iter().any(|(n, _)| n == k) {
                    return Err(Error::InvalidParams(format!("unknown parameter {k}")));
                }
            }
        }
        for (n, v) in &self.used {
            if v.is_zero() {
                return Err(Error::InvalidParams(format!("{n} must be nonzero")));
            }
        }
        Ok(())
    }
}

fn cv(v: &[i64]) -> Covector {
    Covector::from_ints(v)
}

fn halves(a: i64, b: i64) -> Covector {
    Covector(vec![rat(a, 2), rat(b, 2)])
}

fn build(dim: usize, entries: Vec<(Covector, Rational)>) -> Result<VConfiguration> {
    build_configuration(
        dim,
        entries
            .into_iter()
            .enumerate()
            .map(|(i, (c, m))| Entry::new(c, m, format!("a{}", i + 1)))
            .collect(),
    )
}

fn expect(pass: bool, lambda: ExpectedLambda, provenance: Provenance) -> Option<Expected> {
    Some(Expected {
        is_trig_vee: pass,
        lambda_squared: lambda,
        provenance,
    })
}

/// Positive roots of `A_n` in simple-root coordinates: sums of consecutive
/// simple roots.
fn a_roots(n: usize) -> Vec<Covector> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i..n {
            out.push(Covector((0..n).map(|k| if (i..=j).contains(&k) { int(1) } else { int(0) }).collect()));
        }
    }
    out
}

/// Short roots `e_i` and long roots `e_i +- e_j` of `B_n`.
fn b_roots(n: usize) -> (Vec<Covector>, Vec<Covector>) {
    let unit = |i: usize| Covector((0..n).map(|k| if k == i { int(1) } else { int(0) }).collect());
    let short = (0..n).map(unit).collect();
    let mut long = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            long.push(unit(i).add(&unit(j)));
            long.push(unit(i).sub(&unit(j)));
        }
    }
    (short, long)
}

const G2_SHORT: [[i64; 2]; 3] = [[1, 0], [1, 1], [2, 1]];
const G2_LONG: [[i64; 2]; 3] = [[0, 1], [3, 1], [3, 2]];
const TEN: [([i64; 2], usize); 10] = [
    ([1, 0], 0),
    ([0, 1], 0),
    ([2, 0], 1),
    ([0, 2], 1),
    ([1, 1], 2),
    ([1, -1], 2),
    ([1, 2], 3),
    ([1, -2], 3),
    ([2, 1], 3),
    ([2, -1], 3),
];

/// Certified ten-vector multiplicities per orbit (see `symbolic_system`).
fn ten_mults() -> [Rational; 4] {
    [rat(3, 2), rat(3, 8), int(1), rat(1, 4)]
}

/// Fetches an entry, substituting `params` into its multiplicities.
pub fn catalog_get(name: &str, params: Option<&Params>) -> Result<CatalogEntry> {
    if let Some((a, b)) = name.split_once('+') {
        if params.is_some_and(|p| !p.is_empty()) {
            return Err(Error::InvalidParams("direct sums take no parameters".into()));
        }
        let left = catalog_get(a, None)?;
        let right = catalog_get(b, None)?;
        return Ok(CatalogEntry {
            name: name.to_string(),
            cfg: direct_sum(&left.cfg, &right.cfg)?,
            expected: expect(
                left.expected.is_some_and(|e| e.is_trig_vee) && right.expected.is_some_and(|e| e.is_trig_vee),
                ExpectedLambda::NoSolution,
                Provenance::Paper,
            ),
            params: Vec::new(),
        });
    }

    let mut args = Args { given: params, used: Vec::new() };
    let one = Rational::one;
    let (cfg, expected) = match name {
        "A2" => {
            let (a, b, g) = (args.take("ca", one()), args.take("cb", one()), args.take("cg", one()));
            args.finish()?;
            let s = &a * &b + &b * &g + &a * &g;
            let denom = &a * &b * &g;
            let cfg = build(2, vec![(cv(&[1, 0]), a), (cv(&[0, 1]), b), (cv(&[1, 1]), g)])?;
            let lambda = if s.is_zero() {
                ExpectedLambda::NotRecorded
            } else {
                ExpectedLambda::Value(int(4) * &s * &s / denom)
            };
            (cfg, expect(true, lambda, Provenance::Paper))
        }
        "B2" => {
            let c1 = args.take("c1", one());
            let c2 = args.take("c2", one());
            let cp = args.take("cp", one());
            let cm = args.take("cm", one());
            args.finish()?;
            if c1 != c2 {
                return Err(Error::InvalidParams("B2 requires c1 = c2".into()));
            }
            let delta = (&c1 + int(2) * &cp) * (&c1 + int(2) * &cm);
            let denom = &c1 * (int(4) * &cp * &cm + &c1 * (&cp + &cm));
            let cfg = build(2, vec![(cv(&[1, 0]), c1), (cv(&[0, 1]), c2), (cv(&[1, 1]), cp), (cv(&[1, -1]), cm)])?;
            let lambda = if denom.is_zero() || delta.is_zero() {
                ExpectedLambda::NotRecorded
            } else {
                ExpectedLambda::Value(int(4) * &delta * &delta / denom)
            };
            (cfg, expect(true, lambda, Provenance::Paper))
        }
        "Prop4" => {
            let c1 = args.take("c1", int(3));
            let d1 = args.take("d1", one());
            let c2 = args.take("c2", one());
            let cp = args.take("cp", one());
            let cm = args.take("cm", one());
            args.finish()?;
            if cp != cm {
                return Err(Error::InvalidParams("Prop4 requires cp = cm".into()));
            }
            if int(2) * &d1 * &c2 != &cp * (&c1 - &c2) {
                return Err(Error::InvalidParams("Prop4 requires 2 d1 c2 = cp (c1 - c2)".into()));
            }
            let delta = (&c1 + int(4) * &d1 + int(2) * &cp) * (&c2 + int(2) * &cp);
            let denom = (&c2 + int(2) * &cp) * (&c1 + int(4) * &d1) * &cp;
            let cfg = build(
                2,
                vec![(cv(&[1, 0]), c1), (cv(&[2, 0]), d1), (cv(&[0, 1]), c2), (cv(&[1, 1]), cp), (cv(&[1, -1]), cm)],
            )?;
            let lambda = if denom.is_zero() || delta.is_zero() {
                ExpectedLambda::NotRecorded
            } else {
                ExpectedLambda::Value(int(2) * &delta * &delta / denom)
            };
            (cfg, expect(true, lambda, Provenance::Paper))
        }
        "Prop5" => {
            let t = args.take("t", one());
            let s = args.take("s", one());
            args.finish()?;
            let den = int(3) * &t + int(4) * &s;
            if den.is_zero() {
                return Err(Error::InvalidParams("Prop5 requires 3t + 4s != 0".into()));
            }
            let c1 = &t * (int(3) * &t - int(2) * &s) / &den;
            let c2 = int(3) * &t + int(2) * &s;
            if c1.is_zero() || c2.is_zero() {
                return Err(Error::InvalidParams("Prop5 multiplicities must be nonzero".into()));
            }
            let a = int(3) * &t;
            let cfg = build(
                2,
                vec![
                    (cv(&[1, 0]), c1),
                    (cv(&[0, 1]), c2),
                    (cv(&[0, 2]), s),
                    (halves(1, 1), a.clone()),
                    (halves(1, -1), a),
                    (halves(1, 3), t.clone()),
                    (halves(1, -3), t),
                ],
            )?;
            (cfg, expect(true, ExpectedLambda::NotRecorded, Provenance::Paper))
        }
        "G2" => {
            let cs = args.take("cs", one());
            let cl = args.take("cl", one());
            args.finish()?;
            let mut entries: Vec<(Covector, Rational)> = Vec::new();
            for (s, l) in G2_SHORT.iter().zip(&G2_LONG) {
                entries.push((cv(s), cs.clone()));
                entries.push((cv(l), cl.clone()));
            }
            // positive-root order: a, b, b+a, b+2a, b+3a, 2b+3a
            let order = [0usize, 1, 2, 4, 3, 5];
            let entries = order.iter().map(|&i| entries[i].clone()).collect();
            (build(2, entries)?, expect(true, ExpectedLambda::NotRecorded, Provenance::Paper))
        }
        "G2timesScaledA2" => {
            let l = args.take("l", one());
            let d = args.take("d", one());
            args.finish()?;
            if int(3) * &l + int(2) * &d == Rational::zero() {
                return Err(Error::InvalidParams("G2timesScaledA2 is degenerate at d = -3l/2".into()));
            }
            let s = int(3) * &l;
            let mut entries: Vec<(Covector, Rational)> = G2_SHORT.iter().map(|v| (cv(v), s.clone())).collect();
            entries.extend(G2_LONG.iter().map(|v| (cv(v), l.clone())));
            entries.extend(G2_SHORT.iter().map(|v| (cv(&[2 * v[0], 2 * v[1]]), d.clone())));
            // scaling (3, 1, 1) by l keeps lambda^2 linear in l
            let lambda = if d == l {
                ExpectedLambda::Value(rat(900, 7) * &l)
            } else {
                ExpectedLambda::NotRecorded
            };
            (build(2, entries)?, expect(true, lambda, Provenance::Derived))
        }
        "TenVector" => {
            let t = args.take("t", one());
            args.finish()?;
            let m = ten_mults();
            let entries = TEN.iter().map(|(v, o)| (cv(v), &m[*o] * &t)).collect();
            (
                build(2, entries)?,
                expect(true, ExpectedLambda::Value(rat(225, 4) * &t), Provenance::Derived),
            )
        }
        "OrthogonalPair" => {
            let c1 = args.take("c1", one());
            let c2 = args.take("c2", one());
            args.finish()?;
            (
                build(2, vec![(cv(&[1, 0]), c1), (cv(&[0, 1]), c2)])?,
                expect(true, ExpectedLambda::NoSolution, Provenance::Paper),
            )
        }
        "A1" | "A3" | "A4" => {
            let n: usize = name[1..].parse().expect("digit");
            let c = args.take("c", one());
            args.finish()?;
            let entries = a_roots(n).into_iter().map(|r| (r, c.clone())).collect();
            (build(n, entries)?, expect(true, ExpectedLambda::NotRecorded, Provenance::Paper))
        }
        "B3" | "B4" => {
            let n: usize = name[1..].parse().expect("digit");
            let cs = args.take("cs", one());
            let cl = args.take("cl", one());
            args.finish()?;
            let (short, long) = b_roots(n);
            let mut entries: Vec<(Covector, Rational)> = short.into_iter().map(|r| (r, cs.clone())).collect();
            entries.extend(long.into_iter().map(|r| (r, cl.clone())));
            (build(n, entries)?, expect(true, ExpectedLambda::NotRecorded, Provenance::Paper))
        }
        _ => return Err(Error::UnknownName(name.to_string())),
    };
    if !cfg.is_nondegenerate() {
        return Err(Error::InvalidParams(format!("{name} has a degenerate form at these parameters")));
    }
    Ok(CatalogEntry {
        name: name.to_string(),
        cfg,
        expected,
        params: args.used,
    })
}

/// The covectors of an entry with one symbol per multiplicity orbit, for
/// constraint extraction and search.
pub fn symbolic_system(name: &str) -> Result<SymbolicSystem> {
    let named = |dim: usize, v: Vec<(Covector, &str)>| SymbolicSystem::with_symbols(dim, &v);
    match name {
        "A2" => named(2, vec![(cv(&[1, 0]), "ca"), (cv(&[0, 1]), "cb"), (cv(&[1, 1]), "cg")]),
        "B2" => named(2, vec![(cv(&[1, 0]), "c1"), (cv(&[0, 1]), "c2"), (cv(&[1, 1]), "cp"), (cv(&[1, -1]), "cm")]),
        "Prop4" => named(
            2,
            vec![
                (cv(&[1, 0]), "c1"),
                (cv(&[2, 0]), "d1"),
                (cv(&[0, 1]), "c2"),
                (cv(&[1, 1]), "cp"),
                (cv(&[1, -1]), "cm"),
            ],
        ),
        "Prop5" => named(
            2,
            vec![
                (cv(&[1, 0]), "c1"),
                (cv(&[0, 1]), "c2"),
                (cv(&[0, 2]), "d2"),
                (halves(1, 1), "a"),
                (halves(1, -1), "a"),
                (halves(1, 3), "b"),
                (halves(1, -3), "b"),
            ],
        ),
        "G2" => {
            let mut v: Vec<(Covector, &str)> = G2_SHORT.iter().map(|x| (cv(x), "cs")).collect();
            v.extend(G2_LONG.iter().map(|x| (cv(x), "cl")));
            named(2, v)
        }
        "G2timesScaledA2" => {
            let mut v: Vec<(Covector, &str)> = G2_SHORT.iter().map(|x| (cv(x), "s")).collect();
            v.extend(G2_LONG.iter().map(|x| (cv(x), "l")));
            v.extend(G2_SHORT.iter().map(|x| (cv(&[2 * x[0], 2 * x[1]]), "d")));
            named(2, v)
        }
        "TenVector" => {
            let names = ["a", "b", "c", "d"];
            named(2, TEN.iter().map(|(v, o)| (cv(v), names[*o])).collect())
        }
        "OrthogonalPair" => named(2, vec![(cv(&[1, 0]), "c1"), (cv(&[0, 1]), "c2")]),
        _ => {
            let entry = catalog_get(name, None)?;
            SymbolicSystem::distinct(entry.cfg.dim(), entry.cfg.entries().iter().map(|e| e.covector.clone()).collect())
        }
    }
}

/// `name=value` pairs as printed by the CLI.
pub fn format_params(params: &[(String, Rational)]) -> String {
    params
        .iter()
        .map(|(n, v)| format!("{n}={}", fmt_rational(v)))
        .collect::<Vec<_>>()
        .join(" ")
}
