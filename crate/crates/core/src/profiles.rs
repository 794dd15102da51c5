//! Detection-probability profiles.
//!
//! The model treats the probability that a physical object is detected at
//! all as a free, empirically determined parameter. A profile packages one
//! such function — per energy level for the energy observable, per
//! coordinate for the position observable — as a small parametric family
//! loadable from JSON config.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};

fn check_unit_range<R: Scalar>(what: &'static str, p: R) -> Result<R> {
    if p.is_finite() && p >= R::zero() && p <= R::one() {
        Ok(p)
    } else {
        Err(Error::OutOfRange {
            what,
            value: p.as_f64(),
            bounds: "[0, 1]",
        })
    }
}

/// Piecewise-linear table on strictly increasing abscissae, clamped to the
/// first/last value outside the table domain.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearTable<R> {
    xs: Vec<R>,
    ps: Vec<R>,
}

impl<R: Scalar> LinearTable<R> {
    pub fn new(points: Vec<(R, R)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::ParseError("table needs at least one point".into()));
        }
        let mut xs = Vec::with_capacity(points.len());
        let mut ps = Vec::with_capacity(points.len());
        for (x, p) in points {
            if !x.is_finite() {
                return Err(Error::ParseError("non-finite table abscissa".into()));
            }
            if let Some(&last) = xs.last() {
                if x <= last {
                    return Err(Error::ParseError(
                        "table abscissae must be strictly increasing".into(),
                    ));
                }
            }
            xs.push(x);
            ps.push(check_unit_range("table value", p)?);
        }
        Ok(Self { xs, ps })
    }

    pub fn evaluate(&self, x: R) -> R {
        if x <= self.xs[0] {
            return self.ps[0];
        }
        if x >= *self.xs.last().unwrap() {
            return *self.ps.last().unwrap();
        }
        let i = self.xs.partition_point(|&xi| xi <= x);
        let (x0, x1) = (self.xs[i - 1], self.xs[i]);
        let (p0, p1) = (self.ps[i - 1], self.ps[i]);
        p0 + (p1 - p0) * (x - x0) / (x1 - x0)
    }
}

/// Detection probability per energy level.
#[derive(Debug, Clone, PartialEq)]
pub enum EnergyDetectionProfile<R: Scalar> {
    Constant(R),
    /// `p(n) = p0 · r^n`.
    Geometric { p0: R, ratio: R },
    /// Linear interpolation in the level index.
    Table(LinearTable<R>),
}

impl<R: Scalar> EnergyDetectionProfile<R> {
    pub fn constant(p: R) -> Result<Self> {
        Ok(Self::Constant(check_unit_range("p", p)?))
    }

    pub fn geometric(p0: R, ratio: R) -> Result<Self> {
        check_unit_range("p0", p0)?;
        if !(ratio.is_finite() && ratio > R::zero() && ratio <= R::one()) {
            return Err(Error::OutOfRange {
                what: "r",
                value: ratio.as_f64(),
                bounds: "(0, 1]",
            });
        }
        Ok(Self::Geometric { p0, ratio })
    }

    pub fn table(points: Vec<(R, R)>) -> Result<Self> {
        Ok(Self::Table(LinearTable::new(points)?))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Constant(_) => "constant",
            Self::Geometric { .. } => "geometric",
            Self::Table(_) => "table",
        }
    }

    /// `p(n)`, guaranteed inside `[0, 1]` by construction.
    pub fn evaluate(&self, n: usize) -> R {
        let p = match self {
            Self::Constant(p) => *p,
            Self::Geometric { p0, ratio } => *p0 * ratio.powi(n as i32),
            Self::Table(t) => t.evaluate(R::of_usize(n)),
        };
        debug_assert!(p >= R::zero() && p <= R::one());
        p
    }

    pub fn from_json(text: &str) -> Result<Self> {
        match ProfileConfig::parse(text)? {
            ProfileConfig::Constant { p } => Self::constant(R::of(p)),
            ProfileConfig::Geometric { p0, r } => Self::geometric(R::of(p0), R::of(r)),
            ProfileConfig::Table { table } => {
                Self::table(table.iter().map(|&[x, p]| (R::of(x), R::of(p))).collect())
            }
            ProfileConfig::GaussianWindow { .. } => Err(Error::ParseError(
                "kind 'gaussian-window' applies to position, not energy".into(),
            )),
        }
    }
}

/// Detection probability per position coordinate.
#[derive(Debug, Clone, PartialEq)]
pub enum PositionDetectionProfile<R: Scalar> {
    Constant(R),
    /// `p(q) = p_max · exp(-(q-center)²/(2 width²))`.
    GaussianWindow { p_max: R, center: R, width: R },
    /// Piecewise-linear in `q`, clamped outside the table domain.
    Table(LinearTable<R>),
}

impl<R: Scalar> PositionDetectionProfile<R> {
    pub fn constant(p: R) -> Result<Self> {
        Ok(Self::Constant(check_unit_range("p", p)?))
    }

    pub fn gaussian_window(p_max: R, center: R, width: R) -> Result<Self> {
        check_unit_range("p_max", p_max)?;
        if !(width.is_finite() && width > R::zero()) {
            return Err(Error::OutOfRange {
                what: "width",
                value: width.as_f64(),
                bounds: "(0, inf)",
            });
        }
        if !center.is_finite() {
            return Err(Error::OutOfRange {
                what: "center",
                value: center.as_f64(),
                bounds: "(-inf, inf)",
            });
        }
        Ok(Self::GaussianWindow {
            p_max,
            center,
            width,
        })
    }

    pub fn table(points: Vec<(R, R)>) -> Result<Self> {
        Ok(Self::Table(LinearTable::new(points)?))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Constant(_) => "constant",
            Self::GaussianWindow { .. } => "gaussian-window",
            Self::Table(_) => "table",
        }
    }

    /// `p(q)`, guaranteed inside `[0, 1]` by construction.
    pub fn evaluate(&self, q: R) -> R {
        let p = match self {
            Self::Constant(p) => *p,
            Self::GaussianWindow {
                p_max,
                center,
                width,
            } => {
                let z = (q - *center) / *width;
                *p_max * (-z * z / R::of(2.0)).exp()
            }
            Self::Table(t) => t.evaluate(q),
        };
        debug_assert!(p >= R::zero() && p <= R::one());
        p
    }

    pub fn from_json(text: &str) -> Result<Self> {
        match ProfileConfig::parse(text)? {
            ProfileConfig::Constant { p } => Self::constant(R::of(p)),
            ProfileConfig::GaussianWindow {
                p_max,
                center,
                width,
            } => Self::gaussian_window(R::of(p_max), R::of(center), R::of(width)),
            ProfileConfig::Table { table } => {
                Self::table(table.iter().map(|&[x, p]| (R::of(x), R::of(p))).collect())
            }
            ProfileConfig::Geometric { .. } => Err(Error::ParseError(
                "kind 'geometric' applies to energy, not position".into(),
            )),
        }
    }
}

/// JSON wire form shared by both profile families.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ProfileConfig {
    Constant { p: f64 },
    Geometric { p0: f64, r: f64 },
    GaussianWindow {
        p_max: f64,
        #[serde(default)]
        center: f64,
        width: f64,
    },
    Table { table: Vec<[f64; 2]> },
}

impl ProfileConfig {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::ParseError(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn constant_profile_is_constant() {
        let e = EnergyDetectionProfile::constant(0.8).unwrap();
        for n in 0..100 {
            assert_eq!(e.evaluate(n), 0.8);
        }
        let q = PositionDetectionProfile::constant(1.0).unwrap();
        assert_eq!(q.evaluate(-3.7), 1.0);
    }

    #[test]
    fn constant_out_of_range() {
        assert!(matches!(
            EnergyDetectionProfile::<f64>::constant(1.2),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            PositionDetectionProfile::<f64>::constant(-0.1),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn geometric_profile_values() {
        let p = EnergyDetectionProfile::geometric(0.9, 0.5).unwrap();
        assert_relative_eq!(p.evaluate(2), 0.225, epsilon = 1e-15);
        let unit = EnergyDetectionProfile::geometric(1.0, 1.0).unwrap();
        for n in 0..20 {
            assert_eq!(unit.evaluate(n), 1.0);
        }
        assert!(matches!(
            EnergyDetectionProfile::<f64>::geometric(0.5, 2.0),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn gaussian_window_shape() {
        let p = PositionDetectionProfile::gaussian_window(0.9, 1.0, 2.0).unwrap();
        assert_eq!(p.evaluate(1.0), 0.9);
        assert_relative_eq!(p.evaluate(3.0), 0.9 * (-0.5f64).exp(), epsilon = 1e-15);
        assert_relative_eq!(p.evaluate(-1.0), p.evaluate(3.0), epsilon = 1e-15);
        assert!(matches!(
            PositionDetectionProfile::<f64>::gaussian_window(0.9, 0.0, 0.0),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn table_interpolates_and_clamps() {
        let t = PositionDetectionProfile::table(vec![(-1.0, 0.2), (1.0, 0.8)]).unwrap();
        assert_relative_eq!(t.evaluate(0.0), 0.5, epsilon = 1e-15);
        assert_eq!(t.evaluate(-5.0), 0.2);
        assert_eq!(t.evaluate(5.0), 0.8);
    }

    #[test]
    fn table_rejects_bad_input() {
        assert!(matches!(
            LinearTable::<f64>::new(vec![(0.0, 0.5), (0.0, 0.6)]),
            Err(Error::ParseError(_))
        ));
        assert!(matches!(
            LinearTable::<f64>::new(vec![(0.0, 1.5)]),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn json_round_trips_profiles() {
        let e: EnergyDetectionProfile<f64> =
            EnergyDetectionProfile::from_json(r#"{"kind":"geometric","p0":0.9,"r":0.8}"#).unwrap();
        assert_relative_eq!(e.evaluate(1), 0.72, epsilon = 1e-15);

        let p: PositionDetectionProfile<f64> = PositionDetectionProfile::from_json(
            r#"{"kind":"gaussian-window","p_max":0.9,"center":0.0,"width":1.0}"#,
        )
        .unwrap();
        assert_eq!(p.evaluate(0.0), 0.9);

        let t: PositionDetectionProfile<f64> = PositionDetectionProfile::from_json(
            r#"{"kind":"table","table":[[-1.0,0.0],[1.0,1.0]]}"#,
        )
        .unwrap();
        assert_relative_eq!(t.evaluate(0.5), 0.75, epsilon = 1e-15);
    }

    #[test]
    fn json_kind_mismatch_is_rejected() {
        assert!(matches!(
            EnergyDetectionProfile::<f64>::from_json(
                r#"{"kind":"gaussian-window","p_max":0.9,"width":1.0}"#
            ),
            Err(Error::ParseError(_))
        ));
        assert!(matches!(
            PositionDetectionProfile::<f64>::from_json(r#"{"kind":"geometric","p0":0.9,"r":0.8}"#),
            Err(Error::ParseError(_))
        ));
        assert!(matches!(
            PositionDetectionProfile::<f64>::from_json("not json"),
            Err(Error::ParseError(_))
        ));
    }
}
