//! Sparse multivariate polynomials with exact rational coefficients.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::multi_index::MultiIndex;
use crate::rational::Rational;
use crate::varset::{Var, VarSet};

/// Lowest z-degree of a polynomial; `Infinite` for zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    Finite(u32),
    Infinite,
}

/// Highest z-degree of a polynomial; `NegInfinite` for zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinite,
    Finite(u32),
}

/// Lowest `|beta| - |alpha|` over the terms `xi^alpha z^beta`; `Infinite` for zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Eta {
    Finite(i64),
    Infinite,
}

impl Order {
    pub fn finite(self) -> Option<u32> {
        match self {
            Order::Finite(d) => Some(d),
            Order::Infinite => None,
        }
    }
}

impl Degree {
    pub fn finite(self) -> Option<u32> {
        match self {
            Degree::Finite(d) => Some(d),
            Degree::NegInfinite => None,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(d) => write!(f, "{d}"),
            Order::Infinite => f.write_str("+inf"),
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::Finite(d) => write!(f, "{d}"),
            Degree::NegInfinite => f.write_str("-inf"),
        }
    }
}

/// Degree bounds applied to products: terms with z-degree above `z` or
/// t-degree above `t` are dropped. Both are ring congruences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Window {
    pub z: Option<u32>,
    pub t: Option<u32>,
}

impl Window {
    pub const NONE: Window = Window { z: None, t: None };

    pub fn z(d: u32) -> Self {
        Window {
            z: Some(d),
            t: None,
        }
    }

    pub fn from_trunc(trunc: Option<u32>) -> Self {
        Window { z: trunc, t: None }
    }

    fn admits(&self, vars: &VarSet, m: &MultiIndex) -> bool {
        if let Some(d) = self.z {
            if m.degree_in(vars.z_range()) > d {
                return false;
            }
        }
        if let (Some(d), Some(ti)) = (self.t, vars.t()) {
            if m[ti] > d {
                return false;
            }
        }
        true
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SparsePoly {
    vars: VarSet,
    terms: BTreeMap<MultiIndex, Rational>,
}

impl SparsePoly {
    pub fn zero(vars: VarSet) -> Self {
        SparsePoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: VarSet) -> Self {
        Self::constant(vars, Rational::one())
    }

    pub fn constant(vars: VarSet, c: Rational) -> Self {
        Self::monomial(vars, MultiIndex::zeros(vars.len()), c)
    }

    pub fn monomial(vars: VarSet, exps: MultiIndex, c: Rational) -> Self {
        assert_eq!(exps.len(), vars.len(), "exponent vector length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        SparsePoly { vars, terms }
    }

    /// The variable at position `index` of the layout.
    pub fn var(vars: VarSet, index: usize) -> Result<Self> {
        if index >= vars.len() {
            return Err(Error::VarOutOfRange { index, vars });
        }
        Ok(Self::monomial(
            vars,
            MultiIndex::unit(vars.len(), index),
            Rational::one(),
        ))
    }

    /// `z_i` (0-based).
    pub fn z(vars: VarSet, i: usize) -> Self {
        let idx = vars.zi(i).expect("z index out of range");
        Self::var(vars, idx).unwrap()
    }

    /// `xi_i` (0-based).
    pub fn xi(vars: VarSet, i: usize) -> Self {
        let idx = vars.xi(i).expect("layout has no xi block");
        Self::var(vars, idx).unwrap()
    }

    pub fn t(vars: VarSet) -> Self {
        let idx = vars.t().expect("layout has no t");
        Self::var(vars, idx).unwrap()
    }

    /// Builds from arbitrary (possibly repeated, possibly zero) terms.
    pub fn from_terms<I>(vars: VarSet, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, Rational)>,
    {
        let mut acc: BTreeMap<MultiIndex, Rational> = BTreeMap::new();
        for (m, c) in terms {
            if m.len() != vars.len() {
                return Err(Error::VarOutOfRange {
                    index: m.len(),
                    vars,
                });
            }
            *acc.entry(m).or_insert_with(Rational::zero) += c;
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(SparsePoly { vars, terms: acc })
    }

    pub(crate) fn from_map(vars: VarSet, mut terms: HashMap<MultiIndex, Rational>) -> Self {
        terms.retain(|_, c| !c.is_zero());
        SparsePoly {
            vars,
            terms: terms.into_iter().collect(),
        }
    }

    pub fn vars(&self) -> VarSet {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&MultiIndex, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &MultiIndex) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&MultiIndex::zeros(self.vars.len()))
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_zero())
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.vars != other.vars {
            return Err(Error::VarSetMismatch {
                left: self.vars,
                right: other.vars,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let e = terms.entry(m.clone()).or_insert_with(Rational::zero);
            *e += c;
            if e.is_zero() {
                terms.remove(m);
            }
        }
        Ok(SparsePoly {
            vars: self.vars,
            terms,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        SparsePoly {
            vars: self.vars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.vars);
        }
        SparsePoly {
            vars: self.vars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Exact product; with `trunc = Some(d)` every term of z-degree above
    /// `d` is dropped.
    pub fn mul(&self, other: &Self, trunc: Option<u32>) -> Result<Self> {
        self.mul_window(other, Window::from_trunc(trunc))
    }

    pub fn mul_window(&self, other: &Self, w: Window) -> Result<Self> {
        self.check_same(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.vars));
        }
        let zr = self.vars.z_range();
        let mut rhs: Vec<(u32, &MultiIndex, &Rational)> = other
            .terms
            .iter()
            .map(|(m, c)| (m.degree_in(zr.clone()), m, c))
            .collect();
        rhs.sort_by_key(|(d, _, _)| *d);
        let mut acc: HashMap<MultiIndex, Rational> =
            HashMap::with_capacity(self.len().saturating_mul(rhs.len()).min(1 << 16));
        for (ma, ca) in &self.terms {
            let da = ma.degree_in(zr.clone());
            for (db, mb, cb) in &rhs {
                if let Some(d) = w.z {
                    if da + db > d {
                        break;
                    }
                }
                let m = ma.add(mb);
                if w.t.is_some() && !w.admits(&self.vars, &m) {
                    continue;
                }
                let p = ca * *cb;
                match acc.get_mut(&m) {
                    Some(v) => *v += p,
                    None => {
                        acc.insert(m, p);
                    }
                }
            }
        }
        Ok(Self::from_map(self.vars, acc))
    }

    pub fn pow(&self, k: u32, trunc: Option<u32>) -> Self {
        self.pow_window(k, Window::from_trunc(trunc))
    }

    pub fn pow_window(&self, k: u32, w: Window) -> Self {
        let mut acc = Self::one(self.vars).truncate_window(w);
        for _ in 0..k {
            acc = acc.mul_window(self, w).expect("same layout");
        }
        acc
    }

    /// Drops every term with z-degree above `d`.
    pub fn truncate(&self, d: u32) -> Self {
        self.truncate_window(Window::z(d))
    }

    pub fn truncate_window(&self, w: Window) -> Self {
        SparsePoly {
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| w.admits(&self.vars, m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Keeps the terms satisfying `keep`.
    pub fn filter_terms(&self, mut keep: impl FnMut(&MultiIndex) -> bool) -> Self {
        SparsePoly {
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Partial derivative in the variable at position `index`.
    pub fn diff(&self, index: usize) -> Result<Self> {
        if index >= self.vars.len() {
            return Err(Error::VarOutOfRange {
                index,
                vars: self.vars,
            });
        }
        Ok(self.derivative(index, 1))
    }

    /// `k`-th partial derivative in position `index` (unchecked index).
    pub(crate) fn derivative(&self, index: usize, k: u32) -> Self {
        if k == 0 {
            return self.clone();
        }
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m[index];
            if e < k {
                continue;
            }
            let mut m2 = m.clone();
            m2.set(index, e - k);
            let f = crate::rational::falling(e, k);
            terms.insert(m2, c * Rational::from_integer(f));
        }
        SparsePoly {
            vars: self.vars,
            terms,
        }
    }

    /// `d/dz_i`, 0-based.
    pub fn diff_z(&self, i: usize) -> Self {
        let idx = self.vars.zi(i).expect("z index out of range");
        self.derivative(idx, 1)
    }

    /// `d^alpha` with respect to the z-block, `alpha` of length `n`.
    pub fn diff_z_multi(&self, alpha: &MultiIndex) -> Self {
        let zr = self.vars.z_range();
        let mut terms = BTreeMap::new();
        'next: for (m, c) in &self.terms {
            let mut m2 = m.clone();
            let mut f = BigInt::one();
            for (k, &a) in alpha.iter().enumerate() {
                let e = m[zr.start + k];
                if e < a {
                    continue 'next;
                }
                f *= crate::rational::falling(e, a);
                m2.set(zr.start + k, e - a);
            }
            terms.insert(m2, c * Rational::from_integer(f));
        }
        SparsePoly {
            vars: self.vars,
            terms,
        }
    }

    /// Lowest z-total-degree.
    pub fn order(&self) -> Order {
        let zr = self.vars.z_range();
        self.terms
            .keys()
            .map(|m| m.degree_in(zr.clone()))
            .min()
            .map_or(Order::Infinite, Order::Finite)
    }

    /// Highest z-total-degree (xi and t are not counted).
    pub fn degree(&self) -> Degree {
        let zr = self.vars.z_range();
        self.terms
            .keys()
            .map(|m| m.degree_in(zr.clone()))
            .max()
            .map_or(Degree::NegInfinite, Degree::Finite)
    }

    pub fn total_degree(&self) -> Degree {
        self.terms
            .keys()
            .map(|m| m.degree())
            .max()
            .map_or(Degree::NegInfinite, Degree::Finite)
    }

    /// Highest xi-total-degree; 0 for layouts without xi.
    pub fn xi_degree(&self) -> Degree {
        let xr = self.vars.xi_range();
        self.terms
            .keys()
            .map(|m| m.degree_in(xr.clone()))
            .max()
            .map_or(Degree::NegInfinite, Degree::Finite)
    }

    pub fn t_degree(&self) -> Degree {
        match self.vars.t() {
            None => {
                if self.is_zero() {
                    Degree::NegInfinite
                } else {
                    Degree::Finite(0)
                }
            }
            Some(ti) => self
                .terms
                .keys()
                .map(|m| m[ti])
                .max()
                .map_or(Degree::NegInfinite, Degree::Finite),
        }
    }

    /// `min(|beta| - |alpha|)` over terms `xi^alpha z^beta`; t is ignored.
    pub fn eta(&self) -> Result<Eta> {
        if !self.vars.has_xi() {
            return Err(Error::WrongVarSet {
                expected: "XiZ or XiZT",
                got: self.vars,
            });
        }
        let (xr, zr) = (self.vars.xi_range(), self.vars.z_range());
        Ok(self
            .terms
            .keys()
            .map(|m| m.degree_in(zr.clone()) as i64 - m.degree_in(xr.clone()) as i64)
            .min()
            .map_or(Eta::Infinite, Eta::Finite))
    }

    /// Terms whose xi-degree is exactly `k`.
    pub fn xi_slice(&self, k: u32) -> Self {
        let xr = self.vars.xi_range();
        self.filter_terms(|m| m.degree_in(xr.clone()) == k)
    }

    /// Terms whose t-degree is exactly `k`, with t kept.
    pub fn t_slice(&self, k: u32) -> Self {
        match self.vars.t() {
            Some(ti) => self.filter_terms(|m| m[ti] == k),
            None if k == 0 => self.clone(),
            None => Self::zero(self.vars),
        }
    }

    /// Re-expresses the polynomial in a larger layout (same `n`), mapping
    /// each variable to the one with the same role.
    pub fn embed(&self, target: VarSet) -> Result<Self> {
        self.relayout(target)
    }

    /// Moves to a layout lacking some blocks. Fails if a dropped variable
    /// actually occurs.
    pub fn project(&self, target: VarSet) -> Result<Self> {
        self.relayout(target)
    }

    fn relayout(&self, target: VarSet) -> Result<Self> {
        if target == self.vars {
            return Ok(self.clone());
        }
        if target.n != self.vars.n {
            return Err(Error::VarSetMismatch {
                left: self.vars,
                right: target,
            });
        }
        let map: Vec<Option<usize>> = (0..self.vars.len())
            .map(|i| target.index_of(self.vars.role(i).unwrap()))
            .collect();
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut m2 = MultiIndex::zeros(target.len());
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => m2.set(j, e),
                    None => {
                        return Err(Error::WrongVarSet {
                            expected: "a layout containing every occurring variable",
                            got: target,
                        })
                    }
                }
            }
            terms.insert(m2, c.clone());
        }
        Ok(SparsePoly {
            vars: target,
            terms,
        })
    }

    /// Substitutes a value for `t` and drops the t variable.
    pub fn eval_t(&self, value: &Rational) -> Self {
        let Some(ti) = self.vars.t() else {
            return self.clone();
        };
        let target = match self.vars.kind {
            crate::varset::VarKind::ZT => VarSet::z(self.vars.n),
            _ => VarSet::xi_z(self.vars.n),
        };
        let mut acc: HashMap<MultiIndex, Rational> = HashMap::new();
        for (m, c) in &self.terms {
            let mut m2 = m.clone();
            let e = m[ti];
            m2.set(ti, 0);
            let v = c * num_traits::pow(value.clone(), e as usize);
            *acc.entry(m2).or_insert_with(Rational::zero) += v;
        }
        let p = Self::from_map(self.vars, acc);
        p.project(target).expect("t eliminated")
    }

    /// Divides every exponent of `t` by one, i.e. `p / t`. Fails if some
    /// term is free of `t`.
    pub fn div_t(&self) -> Result<Self> {
        let ti = self.vars.t().ok_or(Error::WrongVarSet {
            expected: "a layout with t",
            got: self.vars,
        })?;
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            if m[ti] == 0 {
                return Err(Error::InexactDivision);
            }
            let mut m2 = m.clone();
            m2.set(ti, m[ti] - 1);
            terms.insert(m2, c.clone());
        }
        Ok(SparsePoly {
            vars: self.vars,
            terms,
        })
    }

    /// Leading term in graded-lex order.
    pub fn leading(&self) -> Option<(&MultiIndex, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Exact quotient `self / d`. Fails unless `d` divides `self`.
    pub fn div_exact(&self, d: &Self) -> Result<Self> {
        self.check_same(d)?;
        let (lm, lc) = d.leading().ok_or(Error::InexactDivision)?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quot: BTreeMap<MultiIndex, Rational> = BTreeMap::new();
        while let Some((m, c)) = rem.leading() {
            let q_m = m.checked_sub(&lm).ok_or(Error::InexactDivision)?;
            let q_c = c / &lc;
            let step = SparsePoly::monomial(self.vars, q_m.clone(), q_c.clone());
            rem = rem.sub(&step.mul(d, None)?)?;
            quot.insert(q_m, q_c);
        }
        Ok(SparsePoly {
            vars: self.vars,
            terms: quot,
        })
    }

    /// Term-by-term coefficient map (zeros are removed).
    pub fn map_coeffs(&self, mut f: impl FnMut(&MultiIndex, &Rational) -> Rational) -> Self {
        SparsePoly {
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), f(m, c)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    /// Renders a single monomial as `xi1*z2^2`, or `1` for the empty one.
    pub fn render_monomial(vars: &VarSet, m: &MultiIndex) -> String {
        let parts: Vec<String> = m
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                let v = vars.var_name(i);
                if e == 1 {
                    v
                } else {
                    format!("{v}^{e}")
                }
            })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }

    /// Descending graded-lex list of `(monomial, coefficient)` strings.
    pub fn render_terms(&self) -> Vec<(String, String)> {
        self.terms
            .iter()
            .rev()
            .map(|(m, c)| (Self::render_monomial(&self.vars, m), c.to_string()))
            .collect()
    }

    pub fn var_role(&self, index: usize) -> Option<Var> {
        self.vars.role(index)
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let mono = Self::render_monomial(&self.vars, m);
            if m.is_zero() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&mono)?;
            } else {
                write!(f, "{mag}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparsePoly[{}]({})", self.vars, self)
    }
}

impl Add for &SparsePoly {
    type Output = SparsePoly;
    fn add(self, rhs: &SparsePoly) -> SparsePoly {
        SparsePoly::add(self, rhs).expect("layout mismatch in +")
    }
}

impl Sub for &SparsePoly {
    type Output = SparsePoly;
    fn sub(self, rhs: &SparsePoly) -> SparsePoly {
        SparsePoly::sub(self, rhs).expect("layout mismatch in -")
    }
}

impl Mul for &SparsePoly {
    type Output = SparsePoly;
    fn mul(self, rhs: &SparsePoly) -> SparsePoly {
        SparsePoly::mul(self, rhs, None).expect("layout mismatch in *")
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        SparsePoly::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn z(n: usize, i: usize) -> SparsePoly {
        SparsePoly::z(VarSet::z(n), i)
    }

    #[test]
    fn difference_of_squares() {
        let (a, b) = (z(2, 0), z(2, 1));
        let p = &(&a + &b) * &(&a - &b);
        let expect = &(&a * &a) - &(&b * &b);
        assert_eq!(p, expect);
        assert_eq!(p.to_string(), "z1^2 - z2^2");
    }

    #[test]
    fn annihilator() {
        let p = &z(2, 0) + &SparsePoly::one(VarSet::z(2));
        let q = p.mul(&SparsePoly::zero(VarSet::z(2)), None).unwrap();
        assert!(q.is_zero());
        assert_eq!(q.terms().count(), 0);
    }

    #[test]
    fn truncated_square() {
        let p = &SparsePoly::one(VarSet::z(1)) + &z(1, 0);
        let q = p.mul(&p, Some(1)).unwrap();
        let expect = &SparsePoly::one(VarSet::z(1)) + &z(1, 0).scale(&int(2));
        assert_eq!(q, expect);
    }

    #[test]
    fn mismatch_is_an_error() {
        let r = z(2, 0).add(&z(3, 0));
        assert!(matches!(r, Err(Error::VarSetMismatch { .. })));
        let r = z(2, 0).mul(&SparsePoly::one(VarSet::xi_z(2)), None);
        assert!(matches!(r, Err(Error::VarSetMismatch { .. })));
    }

    #[test]
    fn derivatives() {
        let v = VarSet::z(2);
        let p = &(&z(2, 0) * &z(2, 0)) * &z(2, 1);
        assert_eq!(p.diff(0).unwrap(), (&z(2, 0) * &z(2, 1)).scale(&int(2)));
        assert!(SparsePoly::constant(v, int(7)).diff(0).unwrap().is_zero());
        let w = VarSet::xi_z(2);
        let q = &SparsePoly::xi(w, 0) * &SparsePoly::z(w, 1).pow(2, None);
        assert!(q.diff(w.xi(1).unwrap()).unwrap().is_zero());
        assert!(matches!(q.diff(9), Err(Error::VarOutOfRange { .. })));
    }

    #[test]
    fn order_degree_sentinels() {
        let p = &z(2, 0).pow(2, None) + &z(2, 1).pow(5, None);
        assert_eq!(p.order(), Order::Finite(2));
        assert_eq!(p.degree(), Degree::Finite(5));
        let zero = SparsePoly::zero(VarSet::z(2));
        assert_eq!(zero.order(), Order::Infinite);
        assert_eq!(zero.degree(), Degree::NegInfinite);
        let w = VarSet::xi_z(2);
        let q = &SparsePoly::xi(w, 0).pow(2, None) * &SparsePoly::z(w, 1);
        assert_eq!(q.degree(), Degree::Finite(1));
    }

    #[test]
    fn eta_grading() {
        let w = VarSet::xi_z(2);
        let a = &SparsePoly::xi(w, 0) * &SparsePoly::z(w, 1).pow(2, None);
        assert_eq!(a.eta().unwrap(), Eta::Finite(1));
        let b = &SparsePoly::xi(w, 0) * &SparsePoly::xi(w, 1);
        assert_eq!(b.eta().unwrap(), Eta::Finite(-2));
        assert_eq!(SparsePoly::zero(w).eta().unwrap(), Eta::Infinite);
        assert!(z(2, 0).eta().is_err());
    }

    #[test]
    fn display_canonical() {
        let w = VarSet::xi_z(1);
        let p = SparsePoly::from_terms(
            w,
            [
                (MultiIndex::from_slice(&[0, 0]), int(-1)),
                (
                    MultiIndex::from_slice(&[1, 2]),
                    crate::rational::ratio(3, 2),
                ),
                (MultiIndex::from_slice(&[0, 1]), int(-1)),
            ],
        )
        .unwrap();
        assert_eq!(p.to_string(), "3/2*xi1*z1^2 - z1 - 1");
        assert_eq!(SparsePoly::zero(w).to_string(), "0");
    }

    #[test]
    fn relayout_and_t() {
        let v = VarSet::z_t(1);
        let p = &SparsePoly::z(v, 0) + &(&SparsePoly::t(v) * &SparsePoly::z(v, 0).pow(2, None));
        assert_eq!(p.t_degree(), Degree::Finite(1));
        let at1 = p.eval_t(&int(1));
        assert_eq!(at1.vars(), VarSet::z(1));
        assert_eq!(at1.to_string(), "z1^2 + z1");
        assert!(p.project(VarSet::z(1)).is_err());
        let e = z(1, 0).embed(VarSet::xi_z_t(1)).unwrap();
        assert_eq!(e.to_string(), "z1");
    }

    #[test]
    fn exact_division() {
        let (a, b) = (z(2, 0), z(2, 1));
        let p = &(&a + &b) * &(&a - &b);
        assert_eq!(p.div_exact(&(&a + &b)).unwrap(), &a - &b);
        assert_eq!(a.div_exact(&b), Err(Error::InexactDivision));
    }
}
