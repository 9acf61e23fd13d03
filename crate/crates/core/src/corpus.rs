//! Deterministic families of test maps.
//!
//! * `triangular`: `H_i` depends only on `z_{i+1}, ..., z_n`, so `JH` is
//!   strictly upper triangular. The inverse comes from back-substitution.
//! * `conjugated_cubic`: `T^{-1} H0(Tz)` for a homogeneous cubic triangular
//!   `H0` and a unimodular integer matrix `T`.
//! * `control`: polynomial maps with `JH` not nilpotent.
//! * `random_series`: truncated series with `o(H) >= 2`, for inversion only.
//!
//! Every family draws from its own ChaCha stream, so adding a family to a
//! descriptor does not change the members of the others.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lab::is_nilpotent;
use crate::multi_index::MultiIndex;
use crate::poly::SparsePoly;
use crate::rational::{int, ratio, Rational};
use crate::series::{compose, MapTuple, Precision, SeriesTrunc};
use crate::varset::VarSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Triangular,
    ConjugatedCubic,
    Control,
    RandomSeries,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::Triangular,
        Family::ConjugatedCubic,
        Family::Control,
        Family::RandomSeries,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Triangular => "triangular",
            Family::ConjugatedCubic => "conjugated_cubic",
            Family::Control => "control",
            Family::RandomSeries => "random_series",
        }
    }

    fn stream(self) -> u64 {
        match self {
            Family::Triangular => 1,
            Family::ConjugatedCubic => 2,
            Family::Control => 3,
            Family::RandomSeries => 4,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Family> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s || f.name().replace('_', "-") == s)
            .ok_or_else(|| Error::Corpus(format!("unknown family `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusSpec {
    pub families: Vec<Family>,
    pub ns: Vec<usize>,
    /// Members per family and dimension. Families with fewer distinct
    /// members in a dimension (triangular at n = 1) produce fewer.
    pub count: usize,
    pub seed: u64,
    /// Largest z-degree of a generated component (at least 2).
    pub max_degree: u32,
    /// Precision of `random_series` members.
    pub series_trunc: u32,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec {
            families: Family::ALL.to_vec(),
            ns: vec![1, 2, 3],
            count: 3,
            seed: 0,
            max_degree: 3,
            series_trunc: 8,
        }
    }
}

impl CorpusSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Corpus(m));
        if self.families.is_empty() {
            return bad("no families requested".into());
        }
        if self.ns.is_empty() {
            return bad("no dimensions requested".into());
        }
        if let Some(n) = self.ns.iter().find(|n| !(1..=4).contains(*n)) {
            return bad(format!("dimension {n} outside 1..=4"));
        }
        if self.count == 0 {
            return bad("count must be positive".into());
        }
        if self.max_degree < 2 {
            return bad("max_degree must be at least 2".into());
        }
        if self.series_trunc < 2 {
            return bad("series_trunc must be at least 2".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusMap {
    pub id: String,
    pub family: Family,
    pub h: MapTuple,
    /// Polynomial inverse `G` of `F = z - H`, when known in closed form.
    pub known_inverse: Option<MapTuple>,
    /// `G_t` for `F_t = z - tH`, in the `ZT(n)` layout.
    pub known_inverse_t: Option<MapTuple>,
    /// t-degree of `N_t` in `G_t = z + t N_t` (0 when `N_t = 0`).
    pub inverse_t_degree: Option<u32>,
    pub nilpotent: Option<bool>,
}

impl CorpusMap {
    pub fn n(&self) -> usize {
        self.h.n()
    }
}

pub fn gen_corpus(spec: &CorpusSpec) -> Result<Vec<CorpusMap>> {
    spec.validate()?;
    let mut out = Vec::new();
    for &family in &spec.families {
        for &n in &spec.ns {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            rng.set_stream(family.stream() * 16 + n as u64);
            let maps = match family {
                Family::Triangular => triangular(&mut rng, n, spec)?,
                Family::ConjugatedCubic => conjugated_cubic(&mut rng, n, spec)?,
                Family::Control => control(&mut rng, n, spec)?,
                Family::RandomSeries => random_series(&mut rng, n, spec)?,
            };
            for (i, mut m) in maps.into_iter().enumerate() {
                m.id = format!("{}-n{}-{:02}", family, n, i);
                out.push(m);
            }
        }
    }
    out.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(out)
}

fn entry(family: Family, h: MapTuple) -> CorpusMap {
    CorpusMap {
        id: String::new(),
        family,
        h,
        known_inverse: None,
        known_inverse_t: None,
        inverse_t_degree: None,
        nilpotent: None,
    }
}

fn coefficient(rng: &mut ChaCha8Rng) -> Rational {
    let c = *[-3i64, -2, -1, 1, 2, 3].choose(rng).unwrap();
    if rng.gen_ratio(1, 5) {
        ratio(c, 2)
    } else {
        int(c)
    }
}

/// A nonzero polynomial in the given z positions with terms of degree in
/// `degrees`.
fn random_poly(
    rng: &mut ChaCha8Rng,
    vars: VarSet,
    support: &[usize],
    degrees: (u32, u32),
    terms: usize,
) -> SparsePoly {
    let mut p = SparsePoly::zero(vars);
    while p.is_zero() {
        for _ in 0..terms {
            let deg = rng.gen_range(degrees.0..=degrees.1);
            let mut e = MultiIndex::zeros(vars.len());
            for _ in 0..deg {
                let i = *support.choose(rng).unwrap();
                e.set(i, e[i] + 1);
            }
            p = &p + &SparsePoly::monomial(vars, e, coefficient(rng));
        }
    }
    p
}

fn exact_map(vars: VarSet, comps: Vec<SparsePoly>) -> MapTuple {
    MapTuple::with_vars(vars, comps, Precision::Exact).expect("consistent layout")
}

/// `G` and `G_t` for a strictly triangular `H` by back-substitution:
/// `G_i = z_i + H_i(G_{i+1}, ..., G_n)`.
fn back_substitute(h: &MapTuple) -> Result<(MapTuple, MapTuple, u32)> {
    let n = h.n();
    let solve = |vars: VarSet, scale: &SparsePoly| -> Result<MapTuple> {
        let mut g: Vec<SparsePoly> = (0..n).map(|i| SparsePoly::z(vars, i)).collect();
        let mut degs = vec![1u32; n];
        for i in (0..n).rev() {
            let hi = h.component(i);
            if hi.is_zero() {
                continue;
            }
            let inner = degs[i + 1..].iter().copied().max().unwrap_or(1);
            let bound = hi.degree().finite().unwrap_or(0) * inner;
            let cur = exact_map(vars, g.clone());
            let hg = compose(&SeriesTrunc::exact(hi.clone()), &cur, bound)?.into_poly();
            g[i] = &g[i] + &(scale * &hg);
            degs[i] = bound.max(1);
        }
        Ok(exact_map(vars, g))
    };
    let vz = VarSet::z(n);
    let vt = VarSet::z_t(n);
    let g = solve(vz, &SparsePoly::one(vz))?;
    let gt = solve(vt, &SparsePoly::t(vt))?;
    Ok((g, gt.clone(), nt_degree(&gt)))
}

fn nt_degree(gt: &MapTuple) -> u32 {
    gt.components()
        .iter()
        .filter_map(|c| c.t_degree().finite())
        .max()
        .unwrap_or(0)
        .saturating_sub(1)
}

fn with_inverse(family: Family, h: MapTuple) -> Result<CorpusMap> {
    let (g, gt, d) = back_substitute(&h)?;
    let mut m = entry(family, h);
    m.known_inverse = Some(g);
    m.known_inverse_t = Some(gt);
    m.inverse_t_degree = Some(d);
    m.nilpotent = Some(true);
    Ok(m)
}

fn triangular(rng: &mut ChaCha8Rng, n: usize, spec: &CorpusSpec) -> Result<Vec<CorpusMap>> {
    let vars = VarSet::z(n);
    if n == 1 {
        // the only strictly triangular map in one variable
        return Ok(vec![with_inverse(
            Family::Triangular,
            MapTuple::zero(vars),
        )?]);
    }
    let mut out = Vec::new();
    if n == 2 {
        let h = exact_map(
            vars,
            vec![SparsePoly::z(vars, 1).pow(2, None), SparsePoly::zero(vars)],
        );
        out.push(with_inverse(Family::Triangular, h)?);
    }
    while out.len() < spec.count {
        let comps = (0..n)
            .map(|i| {
                if i + 1 == n || (i > 0 && rng.gen_ratio(1, 4)) {
                    return SparsePoly::zero(vars);
                }
                let support: Vec<usize> = (i + 1..n).collect();
                let terms = rng.gen_range(1..=3);
                random_poly(rng, vars, &support, (2, spec.max_degree), terms)
            })
            .collect();
        out.push(with_inverse(Family::Triangular, exact_map(vars, comps))?);
    }
    Ok(out)
}

type IntMatrix = Vec<Vec<i64>>;

fn int_identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

/// A unimodular `T` and its inverse, as products of elementary matrices.
fn unimodular(rng: &mut ChaCha8Rng, n: usize) -> (IntMatrix, IntMatrix) {
    let mut t = int_identity(n);
    let mut inv = int_identity(n);
    for _ in 0..n + 1 {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c = *[-2i64, -1, 1, 2].choose(rng).unwrap();
        // T <- T (I + c e_ij): column j += c * column i
        for row in t.iter_mut() {
            row[j] += c * row[i];
        }
        // T^{-1} <- (I - c e_ij) T^{-1}: row i -= c * row j
        let rj = inv[j].clone();
        for (a, b) in inv[i].iter_mut().zip(rj) {
            *a -= c * b;
        }
    }
    (t, inv)
}

fn linear_map(vars: VarSet, m: &IntMatrix) -> MapTuple {
    let comps = m
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .fold(SparsePoly::zero(vars), |acc, (j, &c)| {
                    &acc + &SparsePoly::z(vars, j).scale(&int(c))
                })
        })
        .collect();
    exact_map(vars, comps)
}

/// `T^{-1} u(Tz)` componentwise, for an exact tuple `u` of z-degree `<= deg`.
fn conjugate(u: &MapTuple, t: &IntMatrix, inv: &IntMatrix, deg: u32) -> Result<MapTuple> {
    let target = if u.vars().has_t() {
        VarSet::z_t(u.n())
    } else {
        VarSet::z(u.n())
    };
    let tz = linear_map(target, t);
    let composed = u
        .components()
        .iter()
        .map(|c| compose(&SeriesTrunc::exact(c.clone()), &tz, deg).map(SeriesTrunc::into_poly))
        .collect::<Result<Vec<_>>>()?;
    let comps = inv
        .iter()
        .map(|row| {
            row.iter()
                .zip(&composed)
                .fold(SparsePoly::zero(target), |acc, (&c, p)| {
                    &acc + &p.scale(&int(c))
                })
        })
        .collect();
    Ok(exact_map(target, comps))
}

fn conjugated_cubic(rng: &mut ChaCha8Rng, n: usize, spec: &CorpusSpec) -> Result<Vec<CorpusMap>> {
    if n < 2 {
        // a homogeneous cubic in one variable never has nilpotent JH
        return Ok(Vec::new());
    }
    let vars = VarSet::z(n);
    let mut out = Vec::new();
    while out.len() < spec.count {
        let comps = (0..n)
            .map(|i| {
                if i + 1 == n {
                    return SparsePoly::zero(vars);
                }
                let support: Vec<usize> = (i + 1..n).collect();
                let terms = rng.gen_range(1..=2);
                random_poly(rng, vars, &support, (3, 3), terms)
            })
            .collect();
        let h0 = exact_map(vars, comps);
        let (g0, g0t, d) = back_substitute(&h0)?;
        let (t, inv) = unimodular(rng, n);
        let h = conjugate(&h0, &t, &inv, 3)?;
        let nil = is_nilpotent(&h)?;
        if !nil.nilpotent {
            return Err(Error::Corpus(format!(
                "conjugated cubic lost nilpotency: det(I - tJH) = {}",
                nil.certificate
            )));
        }
        let gdeg = g0.max_degree();
        let mut m = entry(Family::ConjugatedCubic, h);
        m.known_inverse = Some(conjugate(&g0, &t, &inv, gdeg)?);
        m.known_inverse_t = Some(conjugate(&g0t, &t, &inv, gdeg)?);
        m.inverse_t_degree = Some(d);
        m.nilpotent = Some(true);
        out.push(m);
    }
    Ok(out)
}

fn control(rng: &mut ChaCha8Rng, n: usize, spec: &CorpusSpec) -> Result<Vec<CorpusMap>> {
    let vars = VarSet::z(n);
    let z = |i: usize| SparsePoly::z(vars, i);
    let sq = |i: usize| z(i).pow(2, None);
    let mut fixed = Vec::new();
    let mut first = vec![SparsePoly::zero(vars); n];
    first[0] = sq(0);
    fixed.push(first);
    // traceless controls: the first nonzero coefficient of det(I - tJH)
    // sits at t^n
    if n >= 2 {
        fixed.push((0..n).map(|i| sq((i + 1) % n)).collect());
    }
    let mut out = Vec::new();
    for comps in fixed.into_iter().take(spec.count) {
        out.push(control_entry(exact_map(vars, comps)));
    }
    let all: Vec<usize> = (0..n).collect();
    let mut attempts = 0;
    while out.len() < spec.count {
        attempts += 1;
        if attempts > 1000 {
            return Err(Error::Corpus(
                "could not draw a non-nilpotent control".into(),
            ));
        }
        let comps = (0..n)
            .map(|_| {
                if rng.gen_ratio(1, 3) {
                    SparsePoly::zero(vars)
                } else {
                    let terms = rng.gen_range(1..=3);
                    random_poly(rng, vars, &all, (2, spec.max_degree), terms)
                }
            })
            .collect();
        let h = exact_map(vars, comps);
        if !is_nilpotent(&h)?.nilpotent {
            out.push(control_entry(h));
        }
    }
    Ok(out)
}

fn control_entry(h: MapTuple) -> CorpusMap {
    let mut m = entry(Family::Control, h);
    m.nilpotent = Some(false);
    m
}

fn random_series(rng: &mut ChaCha8Rng, n: usize, spec: &CorpusSpec) -> Result<Vec<CorpusMap>> {
    let vars = VarSet::z(n);
    let all: Vec<usize> = (0..n).collect();
    let d = spec.series_trunc;
    let out = (0..spec.count)
        .map(|_| {
            let comps = (0..n)
                .map(|_| {
                    let terms = rng.gen_range(2..=4);
                    random_poly(rng, vars, &all, (2, d), terms)
                })
                .collect();
            let h = MapTuple::with_vars(vars, comps, Precision::UpTo(d)).expect("layout");
            entry(Family::RandomSeries, h)
        })
        .collect();
    Ok(out)
}
