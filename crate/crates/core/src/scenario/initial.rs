use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::semiconcave::{
    build_family_f0, AnalyticForm, Generator, SampledFn1d, SemiConcaveFn, SuperdifferentiableFn,
};
use crate::vector::Vector;

/// Initial data addressable by string id.
#[derive(Clone, Debug)]
pub enum InitialCondition {
    /// A finite generating family (`neg-abs`, `min-affine:…`, `concave-poly:…`).
    Family {
        id: String,
        family: SemiConcaveFn,
        concave: bool,
    },
    /// Two-column `x,u` samples (`grid:<file>`).
    Sampled { id: String, data: Arc<SampledFn1d> },
}

impl InitialCondition {
    /// Parses `id`. `grid:` paths are resolved against `base`; `span` is the
    /// region the data will be used on, which fixes the Lipschitz constant of
    /// unbounded polynomials.
    pub fn from_id(id: &str, dim: usize, base: &Path, span: &Grid) -> Result<Self> {
        let bad = |m: String| Error::Config(format!("initial condition `{id}`: {m}"));
        let (head, arg) = id.split_once(':').unwrap_or((id, ""));
        match head {
            "neg-abs" => {
                if dim != 1 {
                    return Err(bad("defined in one dimension".into()));
                }
                let family =
                    SemiConcaveFn::min_affine(&[Vector::d1(1.0), Vector::d1(-1.0)], &[0.0, 0.0])?;
                Ok(Self::Family {
                    id: id.into(),
                    family,
                    concave: true,
                })
            }
            "min-affine" => {
                let (slopes, offsets) = arg
                    .split_once('/')
                    .ok_or_else(|| bad("expected `<slopes>/<offsets>`".into()))?;
                let slopes = slopes
                    .split(';')
                    .map(|s| {
                        let c = parse_list(s, ',').map_err(&bad)?;
                        Vector::new(&c)
                    })
                    .collect::<Result<Vec<_>>>()?;
                let offsets = parse_list(offsets, ';').map_err(&bad)?;
                if slopes.iter().any(|p| p.dim() != dim) {
                    return Err(bad(format!("slopes must have {dim} components")));
                }
                let family =
                    SemiConcaveFn::min_affine(&slopes, &offsets).map_err(|e| bad(e.to_string()))?;
                Ok(Self::Family {
                    id: id.into(),
                    family,
                    concave: true,
                })
            }
            "concave-poly" => {
                if dim != 1 {
                    return Err(bad("defined in one dimension".into()));
                }
                let coeffs = parse_list(arg, ',').map_err(&bad)?;
                if coeffs.len() > 3 || coeffs.get(2).is_some_and(|c| *c > 0.0) {
                    return Err(bad("expected c0,c1,c2 with c2 ≤ 0".into()));
                }
                let c = |i: usize| coeffs.get(i).copied().unwrap_or(0.0);
                let (lo, hi) = span.bounds();
                let reach = lo[0].abs().max(hi[0].abs()) * 3.0;
                let l = c(1).abs() + 2.0 * c(2).abs() * reach;
                let gen = Generator::analytic(
                    Vector::d1(0.0),
                    Vector::d1(0.0),
                    0.0,
                    AnalyticForm::Poly1d(coeffs),
                );
                let family = SemiConcaveFn::new(vec![gen], 0.0, l)?;
                Ok(Self::Family {
                    id: id.into(),
                    family,
                    concave: true,
                })
            }
            "grid" => {
                if dim != 1 {
                    return Err(bad("sampled data are one-dimensional".into()));
                }
                let path = base.join(arg);
                let data = SampledFn1d::from_csv(&path).map_err(|e| bad(e.to_string()))?;
                Ok(Self::Sampled {
                    id: id.into(),
                    data: Arc::new(data),
                })
            }
            _ => Err(bad("unknown id".into())),
        }
    }

    /// Registered ids with their parameter schemas, sorted.
    pub fn builtin_ids() -> Vec<(&'static str, &'static str)> {
        vec![
            (
                "concave-poly",
                "concave-poly:<c0>,<c1>,<c2> with c2 <= 0 (d = 1)",
            ),
            ("grid", "grid:<file> two-column x,u CSV (d = 1)"),
            (
                "min-affine",
                "min-affine:<p;p;...>/<c;c;...> with p = comma-separated components",
            ),
            ("neg-abs", "neg-abs, u(x) = -|x| (d = 1)"),
        ]
    }

    pub fn id(&self) -> &str {
        match self {
            Self::Family { id, .. } | Self::Sampled { id, .. } => id,
        }
    }

    pub fn as_superdifferentiable(&self) -> &dyn SuperdifferentiableFn {
        match self {
            Self::Family { family, .. } => family,
            Self::Sampled { data, .. } => data.as_ref(),
        }
    }

    pub fn value(&self, x: &Vector) -> f64 {
        self.as_superdifferentiable().value(x)
    }

    pub fn lipschitz(&self) -> f64 {
        self.as_superdifferentiable().lipschitz()
    }

    /// Whether the data are known to be concave.
    pub fn is_concave(&self) -> bool {
        match self {
            Self::Family { concave, .. } => *concave,
            Self::Sampled { data, .. } => data.estimate_semiconcavity() <= 1e-6,
        }
    }

    /// A finite generating family for the data: the family itself, or the
    /// family rebuilt from the samples at their nodes.
    pub fn family(&self) -> Result<SemiConcaveFn> {
        match self {
            Self::Family { family, .. } => Ok(family.clone()),
            Self::Sampled { data, .. } => {
                let sites: Vec<Vector> = data.xs().iter().map(|x| Vector::d1(*x)).collect();
                build_family_f0(
                    data.as_ref(),
                    &sites,
                    data.estimate_semiconcavity(),
                    data.estimate_lipschitz(),
                )
            }
        }
    }
}

fn parse_list(s: &str, sep: char) -> std::result::Result<Vec<f64>, String> {
    s.split(sep)
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|e| format!("`{v}` is not a number ({e})"))
        })
        .collect()
}
