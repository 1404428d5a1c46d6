//! Structured-text descriptions of spaces and maps.
//!
//! ```toml
//! [space]
//! kind = "Z"
//! mesh = "1/128"
//! curves = 6
//! pieces = 6
//!
//! [map]
//! name = "z"
//! case = "an"
//! n = 2
//! ```

use serde::{Deserialize, Serialize};

use crate::cylinder::CylinderSpace;
use crate::error::{Error, Result};
use crate::geometry::{parse_rational, Rat};
use crate::maps::NamedMap;
use crate::space::{build_named_space, NamedSpace, Space};

const DEFAULT_PIECES: u32 = 6;
const DEFAULT_CURVES: u32 = 6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDesc {
    pub kind: String,
    /// Cell length in parameter units, as an exact rational such as `"1/128"`.
    #[serde(default = "default_mesh")]
    pub mesh: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pieces: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curves: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_max: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
}

fn default_mesh() -> String {
    "1/64".into()
}

pub enum BuiltSpace {
    Planar(Space),
    Cylinder(CylinderSpace),
}

impl SpaceDesc {
    pub fn from_named(name: &NamedSpace, mesh: Rat) -> Self {
        let mut d = SpaceDesc {
            kind: name.label().to_string(),
            mesh: mesh.to_string(),
            pieces: None,
            curves: None,
            n_max: None,
            m_max: None,
            count: None,
            depth: None,
        };
        match *name {
            NamedSpace::Interval => {}
            NamedSpace::Sine { pieces } | NamedSpace::ExtendedSine { pieces } => d.pieces = Some(pieces),
            NamedSpace::ChainOfSines { curves, pieces } | NamedSpace::W { curves, pieces } | NamedSpace::Z { curves, pieces } => {
                d.curves = Some(curves);
                d.pieces = Some(pieces);
            }
            NamedSpace::ShiftCloud { n_max, m_max } => {
                d.n_max = Some(n_max);
                d.m_max = Some(m_max);
            }
            NamedSpace::Discrete { count } => d.count = Some(count),
        }
        d
    }

    pub fn mesh(&self) -> Result<Rat> {
        let h = parse_rational(&self.mesh)
            .ok_or_else(|| Error::Schema(format!("field `mesh`: `{}` is not a rational number", self.mesh)))?;
        if h <= Rat::from_integer(0) {
            return Err(Error::ZeroMesh(self.mesh.clone()));
        }
        Ok(h)
    }

    pub fn refine_mesh(&mut self, factor: usize) {
        if let Some(h) = parse_rational(&self.mesh) {
            self.mesh = (h / Rat::from_integer(factor as i64)).to_string();
        }
    }

    pub fn named(&self) -> Result<Option<NamedSpace>> {
        let pieces = self.pieces.unwrap_or(DEFAULT_PIECES);
        let curves = self.curves.unwrap_or(DEFAULT_CURVES);
        Ok(Some(match self.kind.as_str() {
            "interval" => NamedSpace::Interval,
            "sine" => NamedSpace::Sine { pieces },
            "extended_sine" => NamedSpace::ExtendedSine { pieces },
            "chain_of_sines" => NamedSpace::ChainOfSines { curves, pieces },
            "W" => NamedSpace::W { curves, pieces },
            "Z" => NamedSpace::Z { curves, pieces },
            "shift_cloud" => NamedSpace::ShiftCloud { n_max: self.n_max.unwrap_or(60), m_max: self.m_max.unwrap_or(60) },
            "discrete" => NamedSpace::Discrete { count: self.count.unwrap_or(2) },
            "cantor" => return Ok(None),
            other => return Err(Error::Schema(format!("field `kind`: unknown space kind `{other}`"))),
        }))
    }

    pub fn build(&self) -> Result<BuiltSpace> {
        match self.named()? {
            Some(named) => Ok(BuiltSpace::Planar(build_named_space(&named, self.mesh()?)?)),
            None => Ok(BuiltSpace::Cylinder(CylinderSpace::new(self.depth.unwrap_or(10))?)),
        }
    }
}

/// A run configuration: a space and optionally a map on it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub space: SpaceDesc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<NamedMap>,
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Config> {
        toml::from_str(text).map_err(|e| Error::Schema(e.to_string()))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Schema(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn desc_round_trips_through_toml() {
        let named = NamedSpace::Z { curves: 4, pieces: 6 };
        let cfg = Config { space: SpaceDesc::from_named(&named, Rat::new(1, 128)), map: None };
        let text = cfg.to_toml().unwrap();
        let back = Config::from_toml(&text).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(back.space.named().unwrap(), Some(named));
        assert_eq!(back.space.mesh().unwrap(), Rat::new(1, 128));
    }

    #[test]
    fn zero_mesh_and_unknown_fields_are_errors() {
        let bad = Config::from_toml("[space]\nkind = \"sine\"\nmesh = \"0\"\n").unwrap();
        assert!(matches!(bad.space.mesh(), Err(Error::ZeroMesh(_))));
        let err = Config::from_toml("[space]\nkind = \"sine\"\nmesch = \"1/2\"\n").unwrap_err();
        assert!(err.to_string().contains("mesch"));
    }

    #[test]
    fn refine_mesh_is_exact() {
        let mut d = SpaceDesc::from_named(&NamedSpace::Interval, Rat::new(1, 2));
        d.refine_mesh(2);
        d.refine_mesh(3);
        assert_eq!(d.mesh().unwrap(), Rat::new(1, 12));
    }
}
