//! JSON map files: `H` as lists of `(coeff, exps)` terms per component.

use agcalc::corpus::CorpusMap;
use agcalc::lab::KnownInverse;
use agcalc::rational::parse_rational;
use agcalc::{Error, MapTuple, MultiIndex, Precision, SparsePoly, VarSet};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    /// Rational as `"p"` or `"p/q"`; any representative is accepted.
    pub coeff: String,
    pub exps: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapFile {
    pub n: usize,
    pub components: Vec<Vec<Term>>,
    /// Present when the components are a series known modulo degree above it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trunc: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    /// Components of a polynomial inverse `G` of `z - H`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub known_inverse: Option<Vec<Vec<Term>>>,
    /// t-degree of `N_t` in `G_t = z + t N_t`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inverse_t_degree: Option<u32>,
}

pub struct LoadedMap {
    pub h: MapTuple,
    pub known: KnownInverse,
}

fn component(vars: VarSet, terms: &[Term]) -> Result<SparsePoly, Error> {
    let mut p = SparsePoly::zero(vars);
    for t in terms {
        if t.exps.len() != vars.n {
            return Err(Error::ArityMismatch {
                expected: vars.n,
                got: t.exps.len(),
            });
        }
        let c = parse_rational(&t.coeff)?;
        p = &p + &SparsePoly::monomial(vars, MultiIndex::from_slice(&t.exps), c);
    }
    Ok(p)
}

fn tuple(vars: VarSet, comps: &[Vec<Term>], precision: Precision) -> Result<MapTuple, Error> {
    if comps.len() != vars.n {
        return Err(Error::ArityMismatch {
            expected: vars.n,
            got: comps.len(),
        });
    }
    let comps = comps
        .iter()
        .map(|c| component(vars, c))
        .collect::<Result<Vec<_>, _>>()?;
    MapTuple::with_vars(vars, comps, precision)
}

impl MapFile {
    pub fn parse(text: &str) -> Result<MapFile, String> {
        serde_json::from_str(text).map_err(|e| format!("map file: {e}"))
    }

    /// Builds `H` (validated to have order at least 2) and any known inverse.
    pub fn load(&self) -> Result<LoadedMap, Error> {
        if self.n == 0 {
            return Err(Error::ArityMismatch {
                expected: 1,
                got: 0,
            });
        }
        let vars = VarSet::z(self.n);
        let precision = self.trunc.map_or(Precision::Exact, Precision::UpTo);
        let h = tuple(vars, &self.components, precision)?;
        let h = match self.trunc {
            Some(d) => h.truncate(d),
            None => h,
        };
        h.require_order_two()?;
        let g = self
            .known_inverse
            .as_ref()
            .map(|g| tuple(vars, g, Precision::Exact))
            .transpose()?;
        Ok(LoadedMap {
            h,
            known: KnownInverse {
                g,
                t_degree: self.inverse_t_degree,
            },
        })
    }

    pub fn from_corpus(m: &CorpusMap) -> MapFile {
        MapFile {
            n: m.n(),
            components: terms_of(&m.h),
            trunc: m.h.precision().bound(),
            name: Some(m.id.clone()),
            family: Some(m.family.to_string()),
            known_inverse: m.known_inverse.as_ref().map(terms_of),
            inverse_t_degree: m.inverse_t_degree,
        }
    }
}

/// Terms of each component in ascending canonical order.
pub fn terms_of(map: &MapTuple) -> Vec<Vec<Term>> {
    map.components()
        .iter()
        .map(|c| {
            c.terms()
                .map(|(m, r)| Term {
                    coeff: r.to_string(),
                    exps: m.as_slice().to_vec(),
                })
                .collect()
        })
        .collect()
}
