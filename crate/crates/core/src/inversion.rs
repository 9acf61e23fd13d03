//! Formal inversion of `F = z - H` with `o(H) >= 2`.
//!
//! Three independent routes produce `G = z + N` modulo z-degree above `d`:
//!
//! * [`invert_fixed_point`]: iterate `N <- H(z + N)`. This is the oracle.
//! * [`invert_ag`]: `G = sum_a (1/a!) d^a (z H^a JF)` where `JF = det(dF)`.
//! * [`invert_lambda`]: `G = sum_m Lambda^m (z P^m JF) / (m!)^2` with
//!   `P = <xi, H>`.
//!
//! Each infinite sum is cut off where its terms provably leave the window;
//! with auditing on, the first discarded shell is computed anyway and
//! checked to vanish modulo z-degree above `d`.
//!
//! A truncated `H` is replaced by its polynomial representative. The
//! inverse modulo z-degree above `d` only depends on `H` modulo that
//! degree, so every identity below is an exact polynomial identity for the
//! representative.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{jacobian, jacobian_det_of_z_minus};
use crate::multi_index::MultiIndex;
use crate::poly::{Order, SparsePoly, Window};
use crate::rational::{factorial, Rational};
use crate::report::Check;
use crate::series::{compose, compose_map, compose_window, MapTuple, Precision, SeriesTrunc};
use crate::varset::{VarKind, VarSet};
use crate::weyl::{lambda_window, phi_apply, PhiInput, ProfiledSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    FixedPoint,
    AbhyankarGurjar,
    LambdaSeries,
}

impl Method {
    pub const ALL: [Method; 3] = [
        Method::FixedPoint,
        Method::AbhyankarGurjar,
        Method::LambdaSeries,
    ];
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::FixedPoint => "fixed_point",
            Method::AbhyankarGurjar => "abhyankar_gurjar",
            Method::LambdaSeries => "lambda_series",
        })
    }
}

/// Record of the cutoff checks performed during one computation.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutoffAudit {
    /// Discarded terms that were computed and checked.
    pub checked: usize,
    /// Descriptions of discarded terms that reached into the window.
    pub violations: Vec<String>,
}

impl CutoffAudit {
    pub fn merge(&mut self, other: CutoffAudit) {
        self.checked += other.checked;
        self.violations.extend(other.violations);
    }

    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    fn discard(&mut self, what: impl FnOnce() -> String, term: &SparsePoly, d: u32) {
        self.checked += 1;
        if let Order::Finite(o) = term.order() {
            if o <= d {
                self.violations
                    .push(format!("{} has order {o} <= {d}", what()));
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InversionOptions {
    /// Compute the first discarded shell of every truncated sum and check
    /// that it vanishes in the window. On by default in debug builds.
    pub audit: bool,
}

impl Default for InversionOptions {
    fn default() -> Self {
        InversionOptions {
            audit: cfg!(debug_assertions),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InversionResult {
    pub g: MapTuple,
    pub n: MapTuple,
    pub method: Method,
    pub degree: u32,
    pub audit: CutoffAudit,
}

impl InversionResult {
    fn from_g(g: MapTuple, method: Method, degree: u32, audit: CutoffAudit) -> Self {
        let n = g
            .sub(&MapTuple::identity(g.vars()))
            .expect("same shape")
            .with_precision(Precision::UpTo(degree));
        InversionResult {
            g,
            n,
            method,
            degree,
            audit,
        }
    }
}

/// Validates `H` and returns its representative modulo z-degree above `d`.
fn prepare(h: &MapTuple, d: u32) -> Result<MapTuple> {
    if h.vars().kind != VarKind::Z {
        return Err(Error::WrongVarSet {
            expected: "Z(n)",
            got: h.vars(),
        });
    }
    h.require_order_two()?;
    h.representative(d)
}

fn prepare_q(q: &SeriesTrunc, n: usize, d: u32) -> Result<SparsePoly> {
    if q.vars() != VarSet::z(n) {
        return Err(Error::WrongVarSet {
            expected: "Z(n) matching the map",
            got: q.vars(),
        });
    }
    q.representative(d)
}

pub fn invert(h: &MapTuple, d: u32, method: Method) -> Result<InversionResult> {
    invert_with(h, d, method, InversionOptions::default())
}

pub fn invert_with(
    h: &MapTuple,
    d: u32,
    method: Method,
    opts: InversionOptions,
) -> Result<InversionResult> {
    match method {
        Method::FixedPoint => invert_fixed_point(h, d),
        Method::AbhyankarGurjar => invert_ag_with(h, d, opts),
        Method::LambdaSeries => invert_lambda_with(h, d, opts),
    }
}

/// `G = z + N` with `N` the fixed point of `N <- H(z + N)`.
pub fn invert_fixed_point(h: &MapTuple, d: u32) -> Result<InversionResult> {
    let h = prepare(h, d)?;
    let vars = h.vars();
    let n = fixed_point(&h, vars, &SparsePoly::one(vars), Window::z(d))?;
    let g = MapTuple::identity(vars)
        .add(&n)?
        .with_precision(Precision::UpTo(d));
    Ok(InversionResult::from_g(
        g,
        Method::FixedPoint,
        d,
        CutoffAudit::default(),
    ))
}

/// Solves `N = c * H(z + N)` in the `target` layout within `window`, where
/// `c` is a scalar multiplier (1, or `t` for the deformation). Each pass
/// fixes at least one more z-degree, so `window.z + 1` passes suffice.
pub(crate) fn fixed_point(
    h: &MapTuple,
    target: VarSet,
    c: &SparsePoly,
    window: Window,
) -> Result<MapTuple> {
    let d = window.z.expect("z bound");
    let id = MapTuple::identity(target);
    let mut n = MapTuple::zero(target).with_precision(Precision::UpTo(d));
    for _ in 0..=d + 1 {
        let g = id.add(&n)?.with_precision(Precision::UpTo(d));
        let next: Vec<SparsePoly> = h
            .components()
            .iter()
            .map(|hi| {
                let s = SeriesTrunc::exact(hi.clone());
                let v = compose_window(&s, &g, window)?;
                v.mul_window(c, window)
            })
            .collect::<Result<_>>()?;
        let next = MapTuple::with_vars(target, next, Precision::UpTo(d))?;
        if next == n {
            return Ok(n);
        }
        n = next;
    }
    unreachable!("fixed-point iteration must converge within d + 1 passes")
}

/// `JF = det(I - JH)` modulo z-degree above `d`.
fn jacobian_f(h: &MapTuple, d: u32) -> SparsePoly {
    jacobian_det_of_z_minus(h, Some(d))
}

/// `H^a` for all `|a| <= max`, each truncated at `d + |a|`.
struct HPowers {
    powers: HashMap<MultiIndex, SparsePoly>,
}

impl HPowers {
    fn build(h: &MapTuple, d: u32, max: u32) -> Self {
        let n = h.n();
        let mut powers = HashMap::new();
        powers.insert(MultiIndex::zeros(n), SparsePoly::one(h.vars()));
        for deg in 1..=max {
            for a in MultiIndex::all_of_degree(n, deg) {
                let i = a.iter().position(|&e| e > 0).unwrap();
                let prev = a.checked_sub(&MultiIndex::unit(n, i)).unwrap();
                let p = powers[&prev]
                    .mul(h.component(i), Some(d + deg))
                    .expect("same layout");
                powers.insert(a, p);
            }
        }
        HPowers { powers }
    }

    fn get(&self, a: &MultiIndex) -> &SparsePoly {
        &self.powers[a]
    }
}

fn inv_factorial(a: &MultiIndex) -> Rational {
    Rational::new(BigInt::one(), a.factorial())
}

/// `sum_{|a| <= d} (1/a!) d^a(u W H^a)` where `W` is a common weight.
fn ag_sum(
    us: &[SparsePoly],
    weight: &SparsePoly,
    h: &MapTuple,
    d: u32,
    audit: Option<&mut CutoffAudit>,
) -> Vec<SparsePoly> {
    let n = h.n();
    let vars = h.vars();
    let max = if audit.is_some() { d + 1 } else { d };
    let hp = HPowers::build(h, d, max);
    let mut out = vec![SparsePoly::zero(vars); us.len()];
    let mut audit = audit;
    for deg in 0..=max {
        for a in MultiIndex::all_of_degree(n, deg) {
            let wa = weight.mul(hp.get(&a), Some(d + deg)).expect("same layout");
            let k = inv_factorial(&a);
            for (slot, u) in out.iter_mut().zip(us) {
                let term = u
                    .mul(&wa, Some(d + deg))
                    .expect("same layout")
                    .diff_z_multi(&a);
                if deg <= d {
                    *slot = &*slot + &term.scale(&k);
                } else if let Some(au) = audit.as_deref_mut() {
                    au.discard(|| format!("AG term a = {a:?}"), &term, d);
                }
            }
        }
    }
    out.into_iter().map(|p| p.truncate(d)).collect()
}

pub fn invert_ag(h: &MapTuple, d: u32) -> Result<InversionResult> {
    invert_ag_with(h, d, InversionOptions::default())
}

/// `G = sum_a (1/a!) d^a (z H^a JF)`.
pub fn invert_ag_with(h: &MapTuple, d: u32, opts: InversionOptions) -> Result<InversionResult> {
    let h = prepare(h, d)?;
    let vars = h.vars();
    let jf = jacobian_f(&h, d);
    let zs: Vec<SparsePoly> = (0..vars.n).map(|i| SparsePoly::z(vars, i)).collect();
    let mut audit = CutoffAudit::default();
    let comps = ag_sum(&zs, &jf, &h, d, opts.audit.then_some(&mut audit));
    let g = MapTuple::with_vars(vars, comps, Precision::UpTo(d))?;
    Ok(InversionResult::from_g(
        g,
        Method::AbhyankarGurjar,
        d,
        audit,
    ))
}

/// `u(G) = sum_a (1/a!) d^a (u H^a JF)` modulo z-degree above `d`.
pub fn ag_apply(u: &SeriesTrunc, h: &MapTuple, d: u32) -> Result<SeriesTrunc> {
    ag_apply_with(u, h, d, InversionOptions::default()).map(|(s, _)| s)
}

pub fn ag_apply_with(
    u: &SeriesTrunc,
    h: &MapTuple,
    d: u32,
    opts: InversionOptions,
) -> Result<(SeriesTrunc, CutoffAudit)> {
    let h = prepare(h, d)?;
    let u = prepare_q(u, h.n(), d)?;
    let jf = jacobian_f(&h, d);
    let mut audit = CutoffAudit::default();
    let r = ag_sum(&[u], &jf, &h, d, opts.audit.then_some(&mut audit));
    Ok((SeriesTrunc::new(r.into_iter().next().unwrap(), d), audit))
}

/// Checks `sum_a (1/a!) d^a (H^a u) = JG * u(G)` modulo z-degree above `d`,
/// the left side by direct summation, the right side from the fixed-point
/// inverse and the determinant of its Jacobian. Needs `H` to order `d + 1`.
pub fn ag_proof_identity(u: &SeriesTrunc, h: &MapTuple, d: u32) -> Result<Check> {
    let h1 = prepare(h, d + 1)?;
    let vars = h1.vars();
    let u = prepare_q(u, h1.n(), d)?;
    let left = ag_sum(
        std::slice::from_ref(&u),
        &SparsePoly::one(vars),
        &h1,
        d,
        None,
    )
    .remove(0);
    let g = invert_fixed_point(&h1, d + 1)?.g;
    let jg = jacobian(&g).det(Some(d));
    let ug = compose(&SeriesTrunc::exact(u), &g, d)?;
    let right = jg.mul(ug.poly(), Some(d))?;
    Ok(Check::equal(
        "sum (1/a!) d^a(H^a u) = JG u(G)",
        &left,
        &right,
    ))
}

/// `k! sum_m Lambda^m (P^{m+k} q JF) / (m! (m+k)!)` for each `q`, restricted
/// to z-degree `<= d`. The result has xi-degree exactly `k`.
fn lambda_sum(
    qs: &[SparsePoly],
    h: &MapTuple,
    k: u32,
    d: u32,
    audit: Option<&mut CutoffAudit>,
) -> Result<Vec<SparsePoly>> {
    let vars = h.vars();
    let xv = vars.with_xi();
    let jf = jacobian_f(h, d).embed(xv)?;
    let p = h.pairing();
    let kfact = Rational::from_integer(factorial(k));

    // term m reaches z-degree >= m + 2k + o(q); keep m <= d - 2k - o(q)
    let cutoffs: Vec<Option<u32>> = qs
        .iter()
        .map(|q| match q.order() {
            Order::Infinite => None,
            Order::Finite(o) => d.checked_sub(2 * k + o),
        })
        .collect();
    let top = cutoffs.iter().flatten().copied().max();
    let auditing = audit.is_some();
    let last = match (top, auditing) {
        (Some(m), true) => Some(m + 1),
        (Some(m), false) => Some(m),
        (None, true) => Some(0),
        (None, false) => None,
    };
    let mut out = vec![SparsePoly::zero(xv); qs.len()];
    let mut audit = audit;
    let Some(last) = last else {
        return Ok(out);
    };

    let weighted: Vec<SparsePoly> = qs
        .iter()
        .map(|q| q.embed(xv).and_then(|q| q.mul(&jf, Some(d))))
        .collect::<Result<_>>()?;
    // P^j truncated at d + j is enough for every later use
    let mut pj = SparsePoly::one(xv);
    for _ in 0..k {
        pj = pj.mul(&p, Some(d + 2 * k))?;
    }
    for m in 0..=last {
        if m > 0 {
            pj = pj.mul(&p, Some(d + m))?;
        }
        let denom = Rational::from_integer(factorial(m) * factorial(m + k));
        for (idx, w) in weighted.iter().enumerate() {
            let cut = cutoffs[idx];
            let keep = matches!(cut, Some(c) if m <= c);
            let shell = match cut {
                Some(c) => m == c + 1,
                None => m == 0,
            };
            if !keep && !(shell && auditing) {
                continue;
            }
            let mut x = pj.mul(w, Some(d + m))?;
            for j in 0..m {
                x = lambda_window(&x, Some(d + m - j - 1))?;
            }
            let x = x.truncate(d);
            if keep {
                out[idx] = &out[idx] + &x.scale(&(&kfact / &denom));
            } else if let Some(au) = audit.as_deref_mut() {
                au.discard(|| format!("Lambda term m = {m}, k = {k}"), &x, d);
            }
        }
    }
    if let Some(au) = audit {
        for (idx, r) in out.iter().enumerate() {
            let xr = xv.xi_range();
            au.checked += 1;
            if r.terms().any(|(mi, _)| mi.degree_in(xr.clone()) != k) {
                au.violations.push(format!(
                    "Lambda sum for input {idx} has xi-degree other than {k}"
                ));
            }
        }
    }
    Ok(out)
}

pub fn invert_lambda(h: &MapTuple, d: u32) -> Result<InversionResult> {
    invert_lambda_with(h, d, InversionOptions::default())
}

/// `G = sum_m Lambda^m (z P^m JF) / (m!)^2`.
pub fn invert_lambda_with(h: &MapTuple, d: u32, opts: InversionOptions) -> Result<InversionResult> {
    let h = prepare(h, d)?;
    let vars = h.vars();
    let zs: Vec<SparsePoly> = (0..vars.n).map(|i| SparsePoly::z(vars, i)).collect();
    let mut audit = CutoffAudit::default();
    let sums = lambda_sum(&zs, &h, 0, d, opts.audit.then_some(&mut audit))?;
    let comps = sums
        .into_iter()
        .map(|s| s.project(vars))
        .collect::<Result<Vec<_>>>()?;
    let g = MapTuple::with_vars(vars, comps, Precision::UpTo(d))?;
    Ok(InversionResult::from_g(g, Method::LambdaSeries, d, audit))
}

/// `q(G) = sum_m Lambda^m (P^m q JF) / (m!)^2` modulo z-degree above `d`.
pub fn q_compose_g(q: &SeriesTrunc, h: &MapTuple, d: u32) -> Result<SeriesTrunc> {
    q_compose_g_with(q, h, d, InversionOptions::default()).map(|(s, _)| s)
}

pub fn q_compose_g_with(
    q: &SeriesTrunc,
    h: &MapTuple,
    d: u32,
    opts: InversionOptions,
) -> Result<(SeriesTrunc, CutoffAudit)> {
    let h = prepare(h, d)?;
    let q = prepare_q(q, h.n(), d)?;
    let mut audit = CutoffAudit::default();
    let s = lambda_sum(&[q], &h, 0, d, opts.audit.then_some(&mut audit))?.remove(0);
    Ok((SeriesTrunc::new(s.project(h.vars())?, d), audit))
}

/// `k! sum_m Lambda^m (P^{m+k} q JF) / (m! (m+k)!)`, which equals
/// `q(G) <xi, N>^k`, as a polynomial in `(xi, z)` with z-degree `<= d`.
pub fn xi_moment_series(h: &MapTuple, q: &SeriesTrunc, k: u32, d: u32) -> Result<SparsePoly> {
    let h = prepare(h, d)?;
    let q = prepare_q(q, h.n(), d)?;
    Ok(lambda_sum(&[q], &h, k, d, None)?.remove(0))
}

/// `q(G) <xi, N>^k` modulo z-degree above `d`, from the fixed-point oracle.
pub fn xi_moment_oracle(h: &MapTuple, q: &SeriesTrunc, k: u32, d: u32) -> Result<SparsePoly> {
    let inv = invert_fixed_point(h, d)?;
    let q = prepare_q(q, h.n(), d)?;
    let qg = compose(&SeriesTrunc::exact(q), &inv.g, d)?.into_poly();
    let xv = h.vars().with_xi();
    let pn = inv.n.pairing().pow(k, Some(d));
    qg.embed(xv)?.mul(&pn, Some(d))
}

/// Checks `Phi(q JF e^{<xi, H>}) = q(G) e^{<xi, N>}` on the window
/// xi-degree `<= k`, z-degree `<= d`; `k` is capped at `d`.
///
/// The left side expands `e^{<xi, H>}` into its slices `P^j / j!` for
/// `j <= d`, each kept to z-degree `d + j`; the right side comes from the
/// fixed-point inverse. `H` must be known to order `d + 1`.
pub fn verify_phi_identity(h: &MapTuple, q: &SeriesTrunc, k: u32, d: u32) -> Result<Check> {
    let h1 = prepare(h, d + 1)?;
    let vars = h1.vars();
    let xv = vars.with_xi();
    let k = k.min(d);
    let q = prepare_q(q, vars.n, d)?;
    let jf = jacobian_f(&h1, d);
    let base = q.mul(&jf, Some(d))?.embed(xv)?;
    let p = h1.pairing();
    let mut slices = base.clone();
    let mut pj = SparsePoly::one(xv);
    for j in 1..=d {
        pj = pj.mul(&p, Some(d + j))?;
        let w = Rational::new(BigInt::one(), factorial(j));
        slices = &slices + &pj.mul(&base, Some(d + j))?.scale(&w);
    }
    let left = phi_apply(&PhiInput::Profiled(ProfiledSeries::new(slices, d)?), k, d)?;

    let h0 = h1.representative(d)?;
    let inv = invert_fixed_point(&h0, d)?;
    let qg = compose(&SeriesTrunc::exact(q), &inv.g, d)?
        .into_poly()
        .embed(xv)?;
    let pn = inv.n.pairing();
    let mut exp_n = SparsePoly::zero(xv);
    let mut pk = SparsePoly::one(xv);
    for j in 0..=k {
        if j > 0 {
            pk = pk.mul(&pn, Some(d))?;
        }
        let w = Rational::new(BigInt::one(), factorial(j));
        exp_n = &exp_n + &pk.scale(&w);
    }
    let right = qg.mul(&exp_n, Some(d))?;
    Ok(Check::equal(
        format!("Phi(q JF e^<xi,H>) = q(G) e^<xi,N> (K={k}, D={d})"),
        &left,
        &right,
    ))
}

/// `F(G) = z` and `G(F) = z` modulo z-degree above `d`.
pub fn round_trip(h: &MapTuple, g: &MapTuple, d: u32) -> Result<[Check; 2]> {
    let h = prepare(h, d)?;
    let vars = h.vars();
    let id = MapTuple::identity(vars);
    let f = id.sub(&h)?;
    let fg = compose_map(&f, g, d)?;
    let gf = compose_map(g, &f, d)?;
    let diff = |a: &MapTuple| -> Check {
        for (i, (x, y)) in a.components().iter().zip(id.components()).enumerate() {
            let c = Check::equal(format!("component {}", i + 1), x, y);
            if !c.pass {
                return c;
            }
        }
        Check::pass("")
    };
    let mut a = diff(&fg);
    a.name = format!("F(G) = z mod deg > {d}");
    let mut b = diff(&gf);
    b.name = format!("G(F) = z mod deg > {d}");
    Ok([a, b])
}

/// `JF(G) * JG = 1` modulo z-degree above `d`. Needs `H` to order `d + 1`.
pub fn chain_rule_check(h: &MapTuple, d: u32) -> Result<Check> {
    let h1 = prepare(h, d + 1)?;
    let vars = h1.vars();
    let g = invert_fixed_point(&h1, d + 1)?.g;
    let jf = jacobian_f(&h1, d);
    let jf_g = compose(&SeriesTrunc::exact(jf), &g.truncate(d), d)?;
    let jg = jacobian(&g).det(Some(d));
    let prod = jf_g.poly().mul(&jg, Some(d))?;
    Ok(Check::equal(
        format!("JF(G) JG = 1 mod deg > {d}"),
        &prod,
        &SparsePoly::one(vars),
    ))
}

/// Coefficientwise equality of several inversion results.
pub fn methods_agree(results: &[InversionResult]) -> Check {
    let Some(first) = results.first() else {
        return Check::pass("method agreement");
    };
    for r in &results[1..] {
        for (i, (a, b)) in first
            .g
            .components()
            .iter()
            .zip(r.g.components())
            .enumerate()
        {
            let c = Check::equal(
                format!("{} vs {} (component {})", first.method, r.method, i + 1),
                a,
                b,
            );
            if !c.pass {
                return c;
            }
        }
    }
    Check::pass("method agreement")
}

/// A zero check helper for callers assembling reports.
pub fn is_identity_up_to(g: &MapTuple) -> bool {
    g.components()
        .iter()
        .enumerate()
        .all(|(i, c)| c == &SparsePoly::z(g.vars(), i))
}
