//! Nilpotency of `JH`, the deformation `F_t = z - tH`, and vanishing scans
//! of `Lambda^m(P^{m+k})` for `P = <xi, H>`.
//!
//! Everything here is exact: `H` must be a polynomial map. The parameter
//! `t` lives in the `ZT`/`XiZT` layouts, so coefficients are in `Q[t]`.
//!
//! Two facts drive the checks:
//!
//! * `det(I - tJH) = 1 - s_1 t + s_2 t^2 - ... +- s_n t^n`, so a
//!   non-nilpotent `JH` has a first nonzero coefficient `c_k t^k` with
//!   `k <= n`.
//! * `sum_m t^m Lambda^m(P^m) / (m!)^2 = JG_t` and `JG_t = 1 / JF_t(G_t)`
//!   with `G_t = z + O(t)`. Comparing `t^k` coefficients gives
//!   `Lambda^m(P^m) = 0` for `1 <= m < k` and
//!   `Lambda^k(P^k) = -(k!)^2 c_k`, a witness with `k <= n`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::inversion::fixed_point;
use crate::matrix::{jacobian, PolyMatrix};
use crate::poly::{Degree, SparsePoly, Window};
use crate::rational::{factorial, Rational};
use crate::report::{first_difference, Check};
use crate::series::{compose, MapTuple, Precision, SeriesTrunc};
use crate::varset::{VarKind, VarSet};
use crate::weyl::lambda;

/// Default ceiling on intermediate term counts during scans.
pub const DEFAULT_TERM_CEILING: usize = 10_000_000;

fn require_exact(h: &MapTuple) -> Result<()> {
    if !h.is_exact() {
        return Err(Error::NotExact);
    }
    if h.vars().kind != VarKind::Z {
        return Err(Error::WrongVarSet {
            expected: "Z(n)",
            got: h.vars(),
        });
    }
    h.require_order_two()
}

/// `det(I - tJH)` in the `ZT(n)` layout.
pub fn deformed_jacobian_det(h: &MapTuple) -> Result<SparsePoly> {
    let vt = VarSet::z_t(h.n());
    let ht = h.embed(vt)?;
    let t = SparsePoly::t(vt);
    let tj = jacobian(&ht).map(|e| &t * e);
    Ok(PolyMatrix::identity(h.n(), vt).sub(&tj)?.det(None))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nilpotency {
    pub nilpotent: bool,
    /// `det(I - tJH)`; equal to 1 exactly when `JH` is nilpotent.
    pub certificate: SparsePoly,
}

impl Nilpotency {
    /// Smallest `k >= 1` with a nonzero `t^k` coefficient in the
    /// certificate, and that coefficient (in `Z(n)`).
    pub fn first_coefficient(&self) -> Option<(u32, SparsePoly)> {
        let deg = self.certificate.t_degree().finite()?;
        let n = self.certificate.vars().n;
        (1..=deg).find_map(|k| {
            let c = self.certificate.t_slice(k);
            if c.is_zero() {
                return None;
            }
            let c = c.eval_t(&Rational::one());
            Some((k, c.project(VarSet::z(n)).unwrap()))
        })
    }
}

/// Decides nilpotency of `JH` through `det(I - tJH) = 1`.
pub fn is_nilpotent(h: &MapTuple) -> Result<Nilpotency> {
    require_exact(h)?;
    let certificate = deformed_jacobian_det(h)?;
    let nilpotent = certificate == SparsePoly::one(certificate.vars());
    Ok(Nilpotency {
        nilpotent,
        certificate,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VanishingReport {
    /// 0 scans `Lambda^m(P^m)`, 1 scans `Lambda^m(P^{m+1})`.
    pub offset: u32,
    pub m_max: u32,
    /// `(m, Lambda^m(P^{m+offset}))`, for `m >= 1` when the offset is 0 and
    /// `m >= 0` when it is 1.
    pub values: Vec<(u32, SparsePoly)>,
    pub first_nonzero: Option<u32>,
    /// Largest scanned `m` with a nonzero value.
    pub last_nonzero: Option<u32>,
    /// Set only when a threshold was asserted: every value past it is zero.
    pub stabilized: Option<bool>,
}

impl VanishingReport {
    fn new(offset: u32, m_max: u32) -> Self {
        VanishingReport {
            offset,
            m_max,
            values: Vec::new(),
            first_nonzero: None,
            last_nonzero: None,
            stabilized: None,
        }
    }

    pub fn all_zero(&self) -> bool {
        self.first_nonzero.is_none()
    }

    pub fn value(&self, m: u32) -> Option<&SparsePoly> {
        self.values.iter().find(|(k, _)| *k == m).map(|(_, v)| v)
    }

    /// Smallest `s` such that every scanned value with `m > s` vanishes,
    /// provided the scan saw at least one vanishing value past it.
    pub fn stabilization_index(&self) -> Option<u32> {
        match self.last_nonzero {
            Some(m) if m >= self.m_max => None,
            Some(m) => Some(m),
            None => Some(0),
        }
    }

    /// Records whether every value with `m > threshold` vanishes.
    pub fn assert_threshold(&mut self, threshold: u32) -> bool {
        let ok = self
            .values
            .iter()
            .all(|(m, v)| *m <= threshold || v.is_zero());
        self.stabilized = Some(ok);
        ok
    }

    fn push(&mut self, m: u32, v: SparsePoly) {
        if !v.is_zero() {
            self.first_nonzero.get_or_insert(m);
            self.last_nonzero = Some(m);
        }
        self.values.push((m, v));
    }
}

/// A scan stopped by the term ceiling, with everything computed so far.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanAborted {
    pub error: Error,
    pub partial: VanishingReport,
}

impl fmt::Display for ScanAborted {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (partial scan up to m = {})",
            self.error,
            self.partial.values.last().map_or(0, |v| v.0)
        )
    }
}

impl std::error::Error for ScanAborted {}

impl From<Box<ScanAborted>> for Error {
    fn from(a: Box<ScanAborted>) -> Error {
        a.error
    }
}

/// Scans `Lambda^m(<xi, H>^{m+offset})` for `m <= m_max`.
pub fn vanishing_scan(
    h: &MapTuple,
    offset: u32,
    m_max: u32,
    ceiling: usize,
) -> std::result::Result<VanishingReport, Box<ScanAborted>> {
    let abort = |e: Error| {
        Box::new(ScanAborted {
            error: e,
            partial: VanishingReport::new(offset, m_max),
        })
    };
    require_exact(h).map_err(abort)?;
    vanishing_scan_poly(&h.pairing(), offset, m_max, ceiling)
}

/// Same scan for an arbitrary polynomial `P(xi, z)`. No equivalence claims
/// are attached to the result.
pub fn vanishing_scan_poly(
    p: &SparsePoly,
    offset: u32,
    m_max: u32,
    ceiling: usize,
) -> std::result::Result<VanishingReport, Box<ScanAborted>> {
    let mut report = VanishingReport::new(offset, m_max);
    if p.vars().kind != VarKind::XiZ {
        return Err(Box::new(ScanAborted {
            error: Error::WrongVarSet {
                expected: "XiZ(n)",
                got: p.vars(),
            },
            partial: report,
        }));
    }
    let guard = |len: usize, m: u32, report: &VanishingReport| {
        if len > ceiling {
            Err(Box::new(ScanAborted {
                error: Error::TermCeiling {
                    terms: len,
                    ceiling,
                    m,
                },
                partial: report.clone(),
            }))
        } else {
            Ok(())
        }
    };
    let start = if offset == 0 { 1 } else { 0 };
    let mut power = p.pow(start + offset, None);
    for m in start..=m_max {
        if m > start {
            power = &power * p;
        }
        guard(power.len(), m, &report)?;
        let mut v = power.clone();
        for _ in 0..m {
            if v.is_zero() {
                break;
            }
            v = lambda(&v).expect("XiZ layout");
            guard(v.len(), m, &report)?;
        }
        report.push(m, v);
    }
    Ok(report)
}

/// Degree of `H` in z, at least 1.
fn map_degree(h: &MapTuple) -> u32 {
    h.max_degree().max(1)
}

/// The fixed-point solution `G_t` of `F_t(G_t) = z`, `F_t = z - tH`,
/// known for z-degree `<= zmax` and t-degree `<= tmax`.
pub fn deformed_inverse(h: &MapTuple, zmax: u32, tmax: u32) -> Result<MapTuple> {
    let vt = VarSet::z_t(h.n());
    let w = Window {
        z: Some(zmax),
        t: Some(tmax),
    };
    let tn = fixed_point(h, vt, &SparsePoly::t(vt), w)?;
    MapTuple::identity(vt).add(&tn)
}

/// `sum_{m <= m_max} t^m Lambda^m(P^m) / (m!)^2`, checked against `JG_t`
/// from the fixed-point inverse of `F_t` on the shared window.
pub fn jacobian_gt_series(h: &MapTuple, m_max: u32) -> Result<SparsePoly> {
    require_exact(h)?;
    let n = h.n();
    let vt = VarSet::z_t(n);
    let vxt = VarSet::xi_z_t(n);
    let p = h.pairing();
    let mut left = SparsePoly::one(vt);
    let mut pm = SparsePoly::one(p.vars());
    for m in 1..=m_max {
        pm = &pm * &p;
        let mut v = pm.clone();
        for _ in 0..m {
            v = lambda(&v)?;
        }
        let f = factorial(m);
        let w = Rational::new(BigInt::one(), &f * &f);
        let term = &v.embed(vxt)?.scale(&w) * &SparsePoly::t(vxt).pow(m, None);
        left = &left + &term.project(vt)?;
    }

    let zmax = m_max * (map_degree(h) - 1);
    let gt = deformed_inverse(h, zmax + 1, m_max)?;
    let jg = jacobian(&gt).det(Some(zmax));
    let right = jg.truncate_window(Window {
        z: Some(zmax),
        t: Some(m_max),
    });
    if let Some(w) = first_difference(&left, &right) {
        return Err(Error::WindowMismatch {
            monomial: w.monomial,
            left: w.left,
            right: w.right,
        });
    }
    Ok(left)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NtSeries {
    /// `sum_{m <= m_max} t^m Lambda^m(P^{m+1}) / (m! (m+1)!)` in `XiZT(n)`.
    pub series: SparsePoly,
    /// The `xi_i` coefficients, i.e. `N_t` up to t-degree `m_max`.
    pub n_t: MapTuple,
}

impl NtSeries {
    pub fn t_degree(&self) -> Degree {
        self.series.t_degree()
    }
}

/// `<xi, N_t> = sum_m t^m Lambda^m(P^{m+1}) / (m! (m+1)!)` for nilpotent
/// `JH`, checked against `G_t = z + t N_t` from fixed-point inversion.
pub fn nt_series(h: &MapTuple, m_max: u32) -> Result<NtSeries> {
    let nil = is_nilpotent(h)?;
    if !nil.nilpotent {
        return Err(Error::NotNilpotent {
            certificate: nil.certificate.to_string(),
        });
    }
    let n = h.n();
    let vxt = VarSet::xi_z_t(n);
    let p = h.pairing();
    let mut series = SparsePoly::zero(vxt);
    let mut pm = p.clone();
    for m in 0..=m_max {
        if m > 0 {
            pm = &pm * &p;
        }
        let mut v = pm.clone();
        for _ in 0..m {
            v = lambda(&v)?;
        }
        let w = Rational::new(BigInt::one(), factorial(m) * factorial(m + 1));
        let term = &v.embed(vxt)?.scale(&w) * &SparsePoly::t(vxt).pow(m, None);
        series = &series + &term;
    }
    let n_t = xi_components(&series)?;

    let deg = map_degree(h);
    let zmax = (m_max + 1) * deg - m_max;
    let gt = deformed_inverse(h, zmax, m_max + 1)?;
    let vt = VarSet::z_t(n);
    for (i, gi) in gt.components().iter().enumerate() {
        let tn = gi - &SparsePoly::z(vt, i);
        let oracle = tn.div_t()?;
        if let Some(w) = first_difference(n_t.component(i), &oracle) {
            return Err(Error::WindowMismatch {
                monomial: format!("component {}: {}", i + 1, w.monomial),
                left: w.left,
                right: w.right,
            });
        }
    }
    Ok(NtSeries { series, n_t })
}

/// Reads the `xi_i` coefficients of a polynomial of xi-degree at most 1.
pub fn xi_components(s: &SparsePoly) -> Result<MapTuple> {
    let vars = s.vars();
    let target = match vars.kind {
        VarKind::XiZ => VarSet::z(vars.n),
        VarKind::XiZT => VarSet::z_t(vars.n),
        _ => {
            return Err(Error::WrongVarSet {
                expected: "XiZ or XiZT",
                got: vars,
            })
        }
    };
    let comps = (0..vars.n)
        .map(|i| {
            let xi = vars.xi(i).unwrap();
            s.filter_terms(|m| m[xi] == 1)
                .derivative(xi, 1)
                .project(target)
        })
        .collect::<Result<Vec<_>>>()?;
    MapTuple::with_vars(target, comps, Precision::Exact)
}

/// What is known in advance about a map's inverse.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KnownInverse {
    /// `G` as a polynomial map.
    pub g: Option<MapTuple>,
    /// t-degree of `N_t` in `G_t = z + t N_t`.
    pub t_degree: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub nilpotency: Nilpotency,
    pub scan0: VanishingReport,
    pub scan1: Option<VanishingReport>,
    /// Smallest `s` with `Lambda^m(P^{m+1}) = 0` for every scanned `m > s`;
    /// `None` when the last scanned value is still nonzero.
    pub stabilization_index: Option<u32>,
    pub nt_t_degree: Option<Degree>,
    pub checks: Vec<Check>,
    pub skipped: Vec<String>,
}

impl EquivalenceReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Runs the nilpotency / vanishing / deformation checks on one map.
pub fn check_equivalences(
    h: &MapTuple,
    m_max: u32,
    known: &KnownInverse,
    ceiling: usize,
) -> Result<EquivalenceReport> {
    let nilpotency = is_nilpotent(h)?;
    let scan0 = vanishing_scan(h, 0, m_max, ceiling)?;
    let n = h.n() as u32;
    let mut checks = Vec::new();
    let mut skipped = Vec::new();

    // Lambda(P) = trace(JH)
    let p = h.pairing();
    let trace = jacobian(h).trace().embed(p.vars())?;
    checks.push(Check::equal("Lambda(P) = trace(JH)", &lambda(&p)?, &trace));

    if nilpotency.nilpotent {
        let c = if scan0.all_zero() {
            Check::pass(format!(
                "nilpotent and Lambda^m(P^m) = 0 for 1 <= m <= {m_max}"
            ))
        } else {
            Check::fail(
                "nilpotent implies Lambda^m(P^m) = 0",
                format!("nonzero at m = {}", scan0.first_nonzero.unwrap()),
            )
        };
        checks.push(c);
    } else {
        let (k, ck) = nilpotency
            .first_coefficient()
            .expect("non-nilpotent certificate has a t term");
        let name = format!("non-nilpotent witness at m <= n = {n}");
        let c = match scan0.first_nonzero {
            Some(m) if m == k && m <= n => {
                let f = Rational::from_integer(factorial(k));
                let expect = ck.scale(&-(&f * &f)).embed(p.vars())?;
                let got = scan0.value(m).unwrap();
                let mut c = Check::equal(name, got, &expect);
                c.detail = Some(format!("witness m = {m}: Lambda^{m}(P^{m}) = {got}"));
                c
            }
            Some(m) => Check::fail(
                name,
                format!("first nonzero at m = {m}, determinant predicts {k}"),
            ),
            None if m_max < k => {
                Check::fail(name, format!("scan too short: m_max = {m_max} < {k}"))
            }
            None => Check::fail(name, "no nonzero Lambda^m(P^m) found"),
        };
        checks.push(c);
    }

    let mut scan1 = None;
    let mut stabilization_index = None;
    let mut nt_t_degree = None;
    if let Some(g) = &known.g {
        checks.push(known_inverse_check(h, g)?);
    }
    if nilpotency.nilpotent {
        let mut s1 = vanishing_scan(h, 1, m_max, ceiling)?;
        stabilization_index = s1.stabilization_index();
        let nt = nt_series(h, m_max);
        match nt {
            Ok(nt) => {
                nt_t_degree = Some(nt.t_degree());
                checks.push(Check::pass(format!(
                    "<xi, N_t> series matches fixed-point N_t to t^{m_max}"
                )));
                if let Some(d) = known.t_degree {
                    let ok = s1.assert_threshold(d);
                    let exact = d >= m_max || s1.stabilization_index() == Some(d);
                    let c = if ok && exact {
                        Check::pass(format!("Lambda^m(P^(m+1)) stabilizes at index {d}"))
                    } else {
                        Check::fail(
                            "stabilization index equals the inverse's t-degree",
                            format!("expected {d}, observed {:?}", s1.stabilization_index()),
                        )
                    };
                    checks.push(c);
                    let td = nt.series.t_degree().finite().unwrap_or(0);
                    checks.push(if td <= d {
                        Check::pass(format!("N_t has t-degree {td} <= {d}"))
                    } else {
                        Check::fail("N_t t-degree bound", format!("{td} > {d}"))
                    });
                } else {
                    skipped.push("stabilization: no known inverse t-degree".into());
                }
            }
            Err(Error::WindowMismatch {
                monomial,
                left,
                right,
            }) => {
                let mut c = Check::fail("<xi, N_t> series matches fixed-point N_t", "mismatch");
                c.witness = Some(crate::report::Witness {
                    monomial,
                    left,
                    right,
                });
                checks.push(c);
            }
            Err(e) => return Err(e),
        }
        scan1 = Some(s1);

        match jacobian_gt_series(h, m_max) {
            Ok(s) => {
                let one = SparsePoly::one(s.vars());
                checks.push(
                    Check::equal("JG_t = 1", &s, &one)
                        .with_detail(format!("matches fixed-point JG_t to t^{m_max}")),
                );
            }
            Err(Error::WindowMismatch {
                monomial,
                left,
                right,
            }) => {
                let mut c = Check::fail("JG_t series matches fixed-point JG_t", "mismatch");
                c.witness = Some(crate::report::Witness {
                    monomial,
                    left,
                    right,
                });
                checks.push(c);
            }
            Err(e) => return Err(e),
        }
    } else {
        skipped.push("stabilization and N_t: JH not nilpotent".into());
        skipped.push("JG_t consistency: JH not nilpotent".into());
    }

    Ok(EquivalenceReport {
        nilpotency,
        scan0,
        scan1,
        stabilization_index,
        nt_t_degree,
        checks,
        skipped,
    })
}

/// `F(G) = z` exactly for a claimed polynomial inverse `G`.
pub fn known_inverse_check(h: &MapTuple, g: &MapTuple) -> Result<Check> {
    let vars = h.vars();
    let bound = map_degree(h).max(1) * g.max_degree().max(1) + g.max_degree();
    let f = MapTuple::identity(vars).sub(h)?;
    for i in 0..vars.n {
        let fi = SeriesTrunc::exact(f.component(i).clone());
        let fg = compose(&fi, g, bound)?;
        let c = Check::equal(
            format!("known inverse: F(G)_{} = z{}", i + 1, i + 1),
            fg.poly(),
            &SparsePoly::z(vars, i),
        );
        if !c.pass {
            return Ok(c);
        }
    }
    Ok(Check::pass("known inverse satisfies F(G) = z"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn map(comps: &[&str]) -> MapTuple {
        let v = VarSet::z(comps.len());
        MapTuple::exact(comps.iter().map(|c| parse_poly(c, v).unwrap()).collect()).unwrap()
    }

    fn zt(s: &str, n: usize) -> SparsePoly {
        parse_poly(s, VarSet::z_t(n)).unwrap()
    }

    #[test]
    fn nilpotency_examples() {
        let a = is_nilpotent(&map(&["z2^2", "0"])).unwrap();
        assert!(a.nilpotent);
        assert_eq!(a.certificate, zt("1", 2));
        let b = is_nilpotent(&map(&["z1^2", "0"])).unwrap();
        assert!(!b.nilpotent);
        assert_eq!(b.certificate, zt("1 - 2*t*z1", 2));
        assert!(is_nilpotent(&map(&["0", "0"])).unwrap().nilpotent);
        let series = map(&["z2^2", "0"]).with_precision(Precision::UpTo(4));
        assert_eq!(is_nilpotent(&series), Err(Error::NotExact));
    }

    #[test]
    fn scan_examples() {
        let r = vanishing_scan(&map(&["z2^2", "0"]), 0, 6, DEFAULT_TERM_CEILING).unwrap();
        assert_eq!(r.values.len(), 6);
        assert!(r.all_zero());
        let r = vanishing_scan(&map(&["z1^2", "0"]), 0, 3, DEFAULT_TERM_CEILING).unwrap();
        assert_eq!(r.first_nonzero, Some(1));
        assert_eq!(
            r.value(1).unwrap(),
            &parse_poly("2*z1", VarSet::xi_z(2)).unwrap()
        );
        for k in [0, 1] {
            let r = vanishing_scan(&map(&["0", "0"]), k, 4, DEFAULT_TERM_CEILING).unwrap();
            assert!(r.all_zero());
        }
    }

    #[test]
    fn scan_ceiling() {
        let h = map(&["z2^2 + z2^3", "z3^2", "0"]);
        let e = vanishing_scan(&h, 1, 6, 8).unwrap_err();
        assert!(matches!(e.error, Error::TermCeiling { ceiling: 8, .. }));
        assert!(e.partial.values.len() < 7);
    }

    #[test]
    fn jacobian_gt_examples() {
        assert_eq!(
            jacobian_gt_series(&map(&["z2^2", "0"]), 4).unwrap(),
            zt("1", 2)
        );
        assert_eq!(jacobian_gt_series(&map(&["0"]), 3).unwrap(), zt("1", 1));
        // Lambda^2(xi1^2 z1^4) = 24 z1^2, divided by (2!)^2
        assert_eq!(
            jacobian_gt_series(&map(&["z1^2", "0"]), 2).unwrap(),
            zt("1 + 2*t*z1 + 6*t^2*z1^2", 2)
        );
    }

    #[test]
    fn nt_examples() {
        let xt = |s: &str, n| parse_poly(s, VarSet::xi_z_t(n)).unwrap();
        assert_eq!(
            nt_series(&map(&["z2^2", "0"]), 4).unwrap().series,
            xt("xi1*z2^2", 2)
        );
        assert!(nt_series(&map(&["0", "0"]), 3).unwrap().series.is_zero());
        assert_eq!(
            nt_series(&map(&["z2^3", "0"]), 4).unwrap().series,
            xt("xi1*z2^3", 2)
        );
        assert!(matches!(
            nt_series(&map(&["z1^2", "0"]), 2),
            Err(Error::NotNilpotent { .. })
        ));
        // a t-dependent case: H = (z2^2, z3^2, 0), G_t = (z1 + t (z2 + t z3^2)^2, z2 + t z3^2, z3)
        let nt = nt_series(&map(&["z2^2", "z3^2", "0"]), 4).unwrap();
        assert_eq!(nt.t_degree(), Degree::Finite(2));
        assert_eq!(
            nt.n_t.component(0),
            &parse_poly("z2^2 + 2*t*z2*z3^2 + t^2*z3^4", VarSet::z_t(3)).unwrap()
        );
    }

    #[test]
    fn equivalence_examples() {
        let known = KnownInverse {
            g: Some(map(&["z1 + z2^2", "z2"])),
            t_degree: Some(0),
        };
        let r = check_equivalences(&map(&["z2^2", "0"]), 6, &known, DEFAULT_TERM_CEILING).unwrap();
        assert!(r.pass(), "{:?}", r.checks);
        assert_eq!(r.stabilization_index, Some(0));

        let r = check_equivalences(
            &map(&["z1^2", "0"]),
            6,
            &KnownInverse::default(),
            DEFAULT_TERM_CEILING,
        )
        .unwrap();
        assert!(r.pass(), "{:?}", r.checks);
        assert!(!r.nilpotency.nilpotent);
        assert_eq!(r.scan0.first_nonzero, Some(1));
        assert_eq!(r.skipped.len(), 2);

        let r = check_equivalences(
            &map(&["0", "0"]),
            3,
            &KnownInverse::default(),
            DEFAULT_TERM_CEILING,
        )
        .unwrap();
        assert!(r.pass());
        assert_eq!(r.stabilization_index, Some(0));
    }

    #[test]
    fn traceless_control_has_second_order_witness() {
        // det(I - tJH) = 1 - 4 t^2 z1 z2, so Lambda^2(P^2) = -(2!)^2 * (-4 z1 z2)
        let h = map(&["z2^2", "z1^2"]);
        let r = check_equivalences(&h, 3, &KnownInverse::default(), DEFAULT_TERM_CEILING).unwrap();
        assert!(r.pass(), "{:?}", r.checks);
        assert_eq!(r.scan0.first_nonzero, Some(2));
        assert_eq!(
            r.scan0.value(2).unwrap(),
            &parse_poly("16*z1*z2", VarSet::xi_z(2)).unwrap()
        );
    }
}
