//! Extraction settings shared by `extract`, `diagram` and manifests, with
//! the string forms used on the command line and in TOML.

use std::fmt;
use std::num::NonZeroUsize;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use voxph_core::filtration::Direction;
use voxph_core::vectorize::{DimSet, FeatureKind};
use voxph_core::volume::{Axis, RangeMode};
use voxph_core::{Bin, DEFAULT_LEVELS};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid {what} '{value}': expected {expected}")]
pub struct ParseError {
    what: &'static str,
    value: String,
    expected: &'static str,
}

/// `minmax` or `fixed:LO:HI`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct RangeArg(pub RangeMode);

impl FromStr for RangeArg {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseError {
            what: "range",
            value: s.into(),
            expected: "minmax or fixed:LO:HI",
        };
        if s == "minmax" {
            return Ok(RangeArg(RangeMode::MinMax));
        }
        let rest = s.strip_prefix("fixed:").ok_or_else(err)?;
        let (lo, hi) = rest.split_once(':').ok_or_else(err)?;
        let lo: f64 = lo.parse().map_err(|_| err())?;
        let hi: f64 = hi.parse().map_err(|_| err())?;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(err());
        }
        Ok(RangeArg(RangeMode::Fixed { lo, hi }))
    }
}

impl fmt::Display for RangeArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            RangeMode::MinMax => f.write_str("minmax"),
            RangeMode::Fixed { lo, hi } => write!(f, "fixed:{lo}:{hi}"),
        }
    }
}

/// `betti` or `silhouette:P`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct VecArg(pub FeatureKind);

impl FromStr for VecArg {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseError {
            what: "vectorization",
            value: s.into(),
            expected: "betti or silhouette:P with P > 0",
        };
        if s == "betti" {
            return Ok(VecArg(FeatureKind::Betti));
        }
        let p: f64 = s.strip_prefix("silhouette:").ok_or_else(err)?.parse().map_err(|_| err())?;
        if !(p.is_finite() && p > 0.0) {
            return Err(err());
        }
        Ok(VecArg(FeatureKind::Silhouette { power: p }))
    }
}

impl fmt::Display for VecArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            FeatureKind::Betti => f.write_str("betti"),
            FeatureKind::Silhouette { power } => write!(f, "silhouette:{power}"),
        }
    }
}

macro_rules! string_serde {
    ($($t:ty),*) => {$(
        impl TryFrom<String> for $t {
            type Error = ParseError;
            fn try_from(s: String) -> Result<Self, ParseError> {
                s.parse()
            }
        }
        impl From<$t> for String {
            fn from(v: $t) -> String {
                v.to_string()
            }
        }
    )*};
}
string_serde!(RangeArg, VecArg);

pub fn parse_axis(s: &str) -> Result<Axis, ParseError> {
    match s {
        "x" => Ok(Axis::X),
        "y" => Ok(Axis::Y),
        "z" => Ok(Axis::Z),
        _ => Err(ParseError {
            what: "axis",
            value: s.into(),
            expected: "x, y or z",
        }),
    }
}

pub fn parse_direction(s: &str) -> Result<Direction, ParseError> {
    match s {
        "sub" => Ok(Direction::Sublevel),
        "super" => Ok(Direction::Superlevel),
        _ => Err(ParseError {
            what: "direction",
            value: s.into(),
            expected: "sub or super",
        }),
    }
}

pub fn parse_dims(s: &str) -> Result<DimSet, ParseError> {
    let err = || ParseError {
        what: "dims",
        value: s.into(),
        expected: "comma-separated subset of 0,1,2",
    };
    let dims: Vec<usize> = s
        .split(',')
        .map(|d| d.trim().parse().map_err(|_| err()))
        .collect::<Result<_, _>>()?;
    DimSet::new(&dims).map_err(|_| err())
}

/// Everything that turns a volume file into diagrams and features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExtractConfig {
    pub levels: Bin,
    pub range: RangeArg,
    /// Middle slices to keep along `axis`; 0 keeps all.
    pub slices: usize,
    pub axis: Axis,
    pub direction: Direction,
    #[serde(rename = "vec")]
    pub vectorization: VecArg,
    pub dims: DimSet,
}

impl Default for ExtractConfig {
    fn default() -> Self {
        Self {
            levels: DEFAULT_LEVELS,
            range: RangeArg::default(),
            slices: 0,
            axis: Axis::Z,
            direction: Direction::Sublevel,
            vectorization: VecArg::default(),
            dims: DimSet::all(),
        }
    }
}

impl ExtractConfig {
    pub fn slice_count(&self) -> Option<NonZeroUsize> {
        NonZeroUsize::new(self.slices)
    }
}

/// Partial settings; `None` leaves the lower-precedence value in place.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExtractOverrides {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub levels: Option<Bin>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub range: Option<RangeArg>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slices: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axis: Option<Axis>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direction: Option<Direction>,
    #[serde(rename = "vec", skip_serializing_if = "Option::is_none")]
    pub vectorization: Option<VecArg>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dims: Option<DimSet>,
}

impl ExtractOverrides {
    pub fn apply(&self, cfg: &mut ExtractConfig) {
        if let Some(v) = self.levels {
            cfg.levels = v;
        }
        if let Some(v) = self.range {
            cfg.range = v;
        }
        if let Some(v) = self.slices {
            cfg.slices = v;
        }
        if let Some(v) = self.axis {
            cfg.axis = v;
        }
        if let Some(v) = self.direction {
            cfg.direction = v;
        }
        if let Some(v) = self.vectorization {
            cfg.vectorization = v;
        }
        if let Some(v) = &self.dims {
            cfg.dims = v.clone();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_forms() {
        assert_eq!("minmax".parse::<RangeArg>().unwrap().0, RangeMode::MinMax);
        assert_eq!(
            "fixed:0:255".parse::<RangeArg>().unwrap().0,
            RangeMode::Fixed { lo: 0.0, hi: 255.0 }
        );
        assert!("fixed:5:5".parse::<RangeArg>().is_err());
        assert!("fixed:0".parse::<RangeArg>().is_err());
        assert_eq!("fixed:1:100".parse::<RangeArg>().unwrap().to_string(), "fixed:1:100");
    }

    #[test]
    fn vec_forms() {
        assert_eq!("betti".parse::<VecArg>().unwrap().0, FeatureKind::Betti);
        assert_eq!(
            "silhouette:2".parse::<VecArg>().unwrap().0,
            FeatureKind::Silhouette { power: 2.0 }
        );
        assert!("silhouette:0".parse::<VecArg>().is_err());
        assert!("landscape".parse::<VecArg>().is_err());
    }

    #[test]
    fn dims_parse() {
        assert_eq!(parse_dims("2,1").unwrap().as_slice(), &[1, 2]);
        assert!(parse_dims("3").is_err());
        assert!(parse_dims("").is_err());
    }

    #[test]
    fn toml_round_trip_and_overrides() {
        let cfg = ExtractConfig::default();
        let text = toml::to_string(&cfg).unwrap();
        assert_eq!(toml::from_str::<ExtractConfig>(&text).unwrap(), cfg);

        let o: ExtractOverrides = toml::from_str("levels = 50\naxis = \"x\"\nvec = \"silhouette:1\"").unwrap();
        let mut merged = ExtractConfig::default();
        o.apply(&mut merged);
        assert_eq!(merged.levels, 50);
        assert_eq!(merged.axis, Axis::X);
        assert_eq!(merged.vectorization.0, FeatureKind::Silhouette { power: 1.0 });
        assert_eq!(merged.direction, Direction::Sublevel);
        assert!(toml::from_str::<ExtractOverrides>("colour = 1").is_err());
    }
}
