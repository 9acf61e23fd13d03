//! Truncated power series in z and tuples of them (formal maps).

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::multi_index::MultiIndex;
use crate::poly::{Order, SparsePoly, Window};
use crate::rational::Rational;
use crate::varset::VarSet;

/// How much of a series is known.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Precision {
    /// The stored polynomial is the whole object.
    Exact,
    /// Known modulo terms of z-degree above the bound.
    UpTo(u32),
}

impl Precision {
    /// Whether the value is determined at least up to z-degree `d`.
    pub fn covers(&self, d: u32) -> bool {
        match self {
            Precision::Exact => true,
            Precision::UpTo(k) => *k >= d,
        }
    }

    pub fn bound(&self) -> Option<u32> {
        match self {
            Precision::Exact => None,
            Precision::UpTo(d) => Some(*d),
        }
    }

    pub fn min(self, other: Precision) -> Precision {
        match (self, other) {
            (Precision::Exact, p) | (p, Precision::Exact) => p,
            (Precision::UpTo(a), Precision::UpTo(b)) => Precision::UpTo(a.min(b)),
        }
    }

    fn require(&self, d: u32) -> Result<()> {
        match self {
            Precision::UpTo(k) if *k < d => Err(Error::InsufficientTruncation {
                required: d,
                available: *k,
            }),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Precision::Exact => f.write_str("exact"),
            Precision::UpTo(d) => write!(f, "O(z^{})", d + 1),
        }
    }
}

/// A power series known modulo z-degree above its precision bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesTrunc {
    poly: SparsePoly,
    precision: Precision,
}

impl SeriesTrunc {
    pub fn exact(poly: SparsePoly) -> Self {
        SeriesTrunc {
            poly,
            precision: Precision::Exact,
        }
    }

    /// Truncates `poly` at z-degree `d`.
    pub fn new(poly: SparsePoly, d: u32) -> Self {
        SeriesTrunc {
            poly: poly.truncate(d),
            precision: Precision::UpTo(d),
        }
    }

    pub fn with_precision(poly: SparsePoly, precision: Precision) -> Self {
        match precision {
            Precision::Exact => Self::exact(poly),
            Precision::UpTo(d) => Self::new(poly, d),
        }
    }

    pub fn poly(&self) -> &SparsePoly {
        &self.poly
    }

    pub fn into_poly(self) -> SparsePoly {
        self.poly
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    pub fn vars(&self) -> VarSet {
        self.poly.vars()
    }

    pub fn is_exact(&self) -> bool {
        self.precision == Precision::Exact
    }

    /// The polynomial representative modulo z-degree above `d`, provided the
    /// series is known that far.
    pub fn representative(&self, d: u32) -> Result<SparsePoly> {
        self.precision.require(d)?;
        Ok(self.poly.truncate(d))
    }
}

impl fmt::Display for SeriesTrunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.precision {
            Precision::Exact => write!(f, "{}", self.poly),
            p => write!(f, "{} + {}", self.poly, p),
        }
    }
}

/// An n-tuple of series sharing one layout and one precision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapTuple {
    vars: VarSet,
    components: Vec<SparsePoly>,
    precision: Precision,
}

impl MapTuple {
    pub fn new(components: Vec<SparsePoly>, precision: Precision) -> Result<Self> {
        let vars = components
            .first()
            .map(|c| c.vars())
            .ok_or(Error::ArityMismatch {
                expected: 1,
                got: 0,
            })?;
        Self::with_vars(vars, components, precision)
    }

    pub fn with_vars(
        vars: VarSet,
        components: Vec<SparsePoly>,
        precision: Precision,
    ) -> Result<Self> {
        if components.len() != vars.n {
            return Err(Error::ArityMismatch {
                expected: vars.n,
                got: components.len(),
            });
        }
        for c in &components {
            if c.vars() != vars {
                return Err(Error::VarSetMismatch {
                    left: vars,
                    right: c.vars(),
                });
            }
        }
        let components = match precision {
            Precision::Exact => components,
            Precision::UpTo(d) => components.iter().map(|c| c.truncate(d)).collect(),
        };
        Ok(MapTuple {
            vars,
            components,
            precision,
        })
    }

    pub fn exact(components: Vec<SparsePoly>) -> Result<Self> {
        Self::new(components, Precision::Exact)
    }

    /// The identity map `z` in the given layout.
    pub fn identity(vars: VarSet) -> Self {
        MapTuple {
            vars,
            components: (0..vars.n).map(|i| SparsePoly::z(vars, i)).collect(),
            precision: Precision::Exact,
        }
    }

    pub fn zero(vars: VarSet) -> Self {
        MapTuple {
            vars,
            components: vec![SparsePoly::zero(vars); vars.n],
            precision: Precision::Exact,
        }
    }

    pub fn vars(&self) -> VarSet {
        self.vars
    }

    pub fn n(&self) -> usize {
        self.vars.n
    }

    pub fn components(&self) -> &[SparsePoly] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &SparsePoly {
        &self.components[i]
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    pub fn is_exact(&self) -> bool {
        self.precision == Precision::Exact
    }

    /// Componentwise minimum order.
    pub fn order(&self) -> Order {
        self.components
            .iter()
            .map(|c| c.order())
            .min()
            .unwrap_or(Order::Infinite)
    }

    /// Highest z-degree over all components (0 for the zero map).
    pub fn max_degree(&self) -> u32 {
        self.components
            .iter()
            .filter_map(|c| c.degree().finite())
            .max()
            .unwrap_or(0)
    }

    /// Fails unless every component has order at least 2.
    pub fn require_order_two(&self) -> Result<()> {
        for (i, c) in self.components.iter().enumerate() {
            if let Order::Finite(o) = c.order() {
                if o < 2 {
                    return Err(Error::OrderTooLow {
                        component: i,
                        order: o,
                    });
                }
            }
        }
        Ok(())
    }

    /// Polynomial representatives modulo z-degree above `d`.
    pub fn representative(&self, d: u32) -> Result<MapTuple> {
        self.precision.require(d)?;
        Ok(MapTuple {
            vars: self.vars,
            components: self.components.iter().map(|c| c.truncate(d)).collect(),
            precision: Precision::UpTo(d),
        })
    }

    pub fn truncate(&self, d: u32) -> MapTuple {
        MapTuple {
            vars: self.vars,
            components: self.components.iter().map(|c| c.truncate(d)).collect(),
            precision: self.precision.min(Precision::UpTo(d)),
        }
    }

    pub fn map_components(&self, f: impl FnMut(&SparsePoly) -> SparsePoly) -> MapTuple {
        MapTuple {
            vars: self.vars,
            components: self.components.iter().map(f).collect(),
            precision: self.precision,
        }
    }

    pub fn with_precision(mut self, p: Precision) -> MapTuple {
        if let Precision::UpTo(d) = p {
            self.components = self.components.iter().map(|c| c.truncate(d)).collect();
        }
        self.precision = p;
        self
    }

    /// `self + other` componentwise; the result is known to the lower precision.
    pub fn add(&self, other: &MapTuple) -> Result<MapTuple> {
        if self.n() != other.n() {
            return Err(Error::ArityMismatch {
                expected: self.n(),
                got: other.n(),
            });
        }
        let comps = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.add(b))
            .collect::<Result<Vec<_>>>()?;
        MapTuple::with_vars(self.vars, comps, self.precision.min(other.precision))
    }

    pub fn sub(&self, other: &MapTuple) -> Result<MapTuple> {
        self.add(&other.map_components(|c| c.neg()))
    }

    pub fn embed(&self, target: VarSet) -> Result<MapTuple> {
        let comps = self
            .components
            .iter()
            .map(|c| c.embed(target))
            .collect::<Result<Vec<_>>>()?;
        MapTuple::with_vars(target, comps, self.precision)
    }

    /// `<xi, self> = sum_i xi_i * self_i` in the layout with an xi block.
    pub fn pairing(&self) -> SparsePoly {
        let target = self.vars.with_xi();
        let mut acc = SparsePoly::zero(target);
        for (i, c) in self.components.iter().enumerate() {
            let c = c.embed(target).expect("adding xi block");
            acc = &acc + &(&SparsePoly::xi(target, i) * &c);
        }
        acc
    }
}

impl fmt::Display for MapTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")?;
        if let Precision::UpTo(d) = self.precision {
            write!(f, " mod deg > {d}")?;
        }
        Ok(())
    }
}

/// `u(g_1, ..., g_n)` modulo z-degree above `d`.
///
/// `u` lives in the z-only layout of the same `n` (or in `ZT(n)` when `g`
/// carries t, which then passes through unchanged); the result lives in
/// `g`'s layout. Substitution is Horner-style in each variable with every
/// intermediate product truncated at `d` (and at the t bound of `window`
/// when the target carries t).
pub fn compose(u: &SeriesTrunc, g: &MapTuple, d: u32) -> Result<SeriesTrunc> {
    compose_window(u, g, Window::z(d)).map(|p| SeriesTrunc::new(p, d))
}

/// Like [`compose`] but with an explicit product window; `window.z` must be set.
pub fn compose_window(u: &SeriesTrunc, g: &MapTuple, window: Window) -> Result<SparsePoly> {
    let d = window.z.expect("composition needs a z bound");
    let n = g.n();
    let uv = u.vars();
    let t_ok = uv == VarSet::z_t(n) && g.vars().has_t();
    if uv != VarSet::z(n) && !t_ok {
        return Err(Error::WrongVarSet {
            expected: "Z(n) matching the tuple length (or ZT(n) into a layout with t)",
            got: uv,
        });
    }
    if !g.precision().covers(d) {
        return Err(Error::InsufficientTruncation {
            required: d,
            available: g.precision().bound().unwrap_or(0),
        });
    }
    if !u.is_exact() {
        for (i, c) in g.components().iter().enumerate() {
            if !c.constant_term().is_zero() {
                return Err(Error::IllDefinedComposition { component: i });
            }
        }
        if !u.precision().covers(d) {
            return Err(Error::InsufficientTruncation {
                required: d,
                available: u.precision().bound().unwrap_or(0),
            });
        }
    }
    let terms: Vec<(MultiIndex, Rational)> = u
        .poly()
        .terms()
        .map(|(m, c)| (m.clone(), c.clone()))
        .collect();
    Ok(horner(&terms, 0, g, window))
}

fn horner(terms: &[(MultiIndex, Rational)], pos: usize, g: &MapTuple, w: Window) -> SparsePoly {
    let vars = g.vars();
    if terms.is_empty() {
        return SparsePoly::zero(vars);
    }
    if pos == g.n() {
        // only a passive t may remain
        let mut acc = SparsePoly::zero(vars);
        for (m, c) in terms {
            let mut e = MultiIndex::zeros(vars.len());
            if m.len() > g.n() {
                e.set(vars.t().expect("target has t"), m[g.n()]);
            }
            acc = &acc + &SparsePoly::monomial(vars, e, c.clone());
        }
        return acc.truncate_window(w);
    }
    let mut groups: BTreeMap<u32, Vec<(MultiIndex, Rational)>> = BTreeMap::new();
    for (m, c) in terms {
        groups
            .entry(m[pos])
            .or_default()
            .push((m.clone(), c.clone()));
    }
    let gi = g.component(pos);
    let mut acc = SparsePoly::zero(vars);
    let mut prev: Option<u32> = None;
    for (&e, group) in groups.iter().rev() {
        if let Some(p) = prev {
            for _ in e..p {
                acc = acc.mul_window(gi, w).expect("same layout");
            }
        }
        acc = &acc + &horner(group, pos + 1, g, w);
        prev = Some(e);
    }
    if let Some(p) = prev {
        for _ in 0..p {
            acc = acc.mul_window(gi, w).expect("same layout");
        }
    }
    acc
}

/// Composes every component of `outer` (a tuple in z-only layout) with `inner`.
pub fn compose_map(outer: &MapTuple, inner: &MapTuple, d: u32) -> Result<MapTuple> {
    let comps = outer
        .components()
        .iter()
        .map(|c| {
            let s = SeriesTrunc::with_precision(c.clone(), outer.precision());
            compose(&s, inner, d).map(SeriesTrunc::into_poly)
        })
        .collect::<Result<Vec<_>>>()?;
    MapTuple::with_vars(inner.vars(), comps, Precision::UpTo(d))
}

/// `1` as a series in the given layout.
pub fn one(vars: VarSet) -> SeriesTrunc {
    SeriesTrunc::exact(SparsePoly::constant(vars, Rational::one()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn z(n: usize, i: usize) -> SparsePoly {
        SparsePoly::z(VarSet::z(n), i)
    }

    #[test]
    fn substitute_hand_expansion() {
        let u = SeriesTrunc::exact(z(2, 0).pow(2, None));
        let g = MapTuple::exact(vec![&z(2, 0) + &z(2, 1).pow(2, None), z(2, 1)]).unwrap();
        let r = compose(&u, &g, 4).unwrap();
        let expect = &(&z(2, 0).pow(2, None) + &(&z(2, 0) * &z(2, 1).pow(2, None)).scale(&int(2)))
            + &z(2, 1).pow(4, None);
        assert_eq!(r.poly(), &expect);
    }

    #[test]
    fn identity_substitution() {
        let u = SeriesTrunc::new(
            &(&z(2, 0).pow(3, None) + &z(2, 1)) + &(&z(2, 0) * &z(2, 1)).pow(3, None),
            6,
        );
        let id = MapTuple::identity(VarSet::z(2));
        assert_eq!(compose(&u, &id, 4).unwrap().poly(), &u.poly().truncate(4));
    }

    #[test]
    fn naive_inverse_guess_fails() {
        // (z + z^2) is not inverted by (z - z^2): the round trip leaves -2 z^3.
        let g = MapTuple::new(vec![&z(1, 0) + &z(1, 0).pow(2, None)], Precision::UpTo(3)).unwrap();
        let f = MapTuple::new(vec![&z(1, 0) - &z(1, 0).pow(2, None)], Precision::UpTo(3)).unwrap();
        let first = compose(&SeriesTrunc::exact(z(1, 0)), &g, 3).unwrap();
        let round = compose(&first, &f, 3).unwrap();
        assert_eq!(
            round.poly(),
            &(&z(1, 0) - &z(1, 0).pow(3, None).scale(&int(2)))
        );
    }

    #[test]
    fn ill_defined_composition() {
        let u = SeriesTrunc::new(z(1, 0), 3);
        let g = MapTuple::exact(vec![&SparsePoly::one(VarSet::z(1)) + &z(1, 0)]).unwrap();
        assert_eq!(
            compose(&u, &g, 3),
            Err(Error::IllDefinedComposition { component: 0 })
        );
        // an exact polynomial may be shifted
        let u = SeriesTrunc::exact(z(1, 0).pow(2, None));
        let r = compose(&u, &g, 3).unwrap();
        assert_eq!(r.poly().to_string(), "z1^2 + 2*z1 + 1");
    }

    #[test]
    fn insufficient_truncation() {
        let u = SeriesTrunc::new(z(1, 0), 2);
        let id = MapTuple::identity(VarSet::z(1));
        assert!(matches!(
            compose(&u, &id, 3),
            Err(Error::InsufficientTruncation {
                required: 3,
                available: 2
            })
        ));
    }

    #[test]
    fn passive_t() {
        let vt = VarSet::z_t(1);
        let u = SeriesTrunc::exact(crate::parse::parse_poly("t*z1^2 + t^2", vt).unwrap());
        let g = MapTuple::exact(vec![crate::parse::parse_poly("2*z1", vt).unwrap()]).unwrap();
        assert_eq!(
            compose(&u, &g, 5).unwrap().poly().to_string(),
            "4*z1^2*t + t^2"
        );
        let g = MapTuple::exact(vec![z(1, 0)]).unwrap();
        assert!(compose(&u, &g, 5).is_err());
    }

    #[test]
    fn order_two_check() {
        let h = MapTuple::exact(vec![z(2, 1).pow(2, None), z(2, 0)]).unwrap();
        assert_eq!(
            h.require_order_two(),
            Err(Error::OrderTooLow {
                component: 1,
                order: 1
            })
        );
    }

    #[test]
    fn pairing() {
        let h =
            MapTuple::exact(vec![z(2, 1).pow(2, None), SparsePoly::zero(VarSet::z(2))]).unwrap();
        assert_eq!(h.pairing().to_string(), "xi1*z2^2");
    }
}
