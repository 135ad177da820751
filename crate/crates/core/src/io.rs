//! JSON formats for maps and reports.
//!
//! A map file holds a lift over one period:
//!
//! ```json
//! { "degree": 1, "vertices": [["0", "1/2"], ["1", "3/2"]], "kind": "lift" }
//! ```
//!
//! `kind` is optional and defaults to `"lift"`; `"interval"` marks a map of
//! `[0,1]` into itself whose vertices are taken as they are.

use std::fs;
use std::path::Path;

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::plcore::{PLLift, PlFn};
use crate::rational::Rational;

/// Version tag embedded in every report.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MapKind {
    #[default]
    Lift,
    Interval,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapFile {
    pub degree: i64,
    pub vertices: Vec<(Rational, Rational)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<MapKind>,
}

/// What a map file decodes to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LoadedMap {
    Lift(PLLift),
    Interval(PlFn),
}

impl MapFile {
    pub fn from_lift(m: &PLLift) -> Self {
        MapFile { degree: m.degree(), vertices: m.vertices().to_vec(), kind: None }
    }

    pub fn from_interval(f: &PlFn) -> Self {
        MapFile { degree: 0, vertices: f.vertices().to_vec(), kind: Some(MapKind::Interval) }
    }

    pub fn decode(self) -> Result<LoadedMap> {
        match self.kind.unwrap_or_default() {
            MapKind::Lift => Ok(LoadedMap::Lift(PLLift::new(self.degree, self.vertices)?)),
            MapKind::Interval => Ok(LoadedMap::Interval(PlFn::new(self.vertices)?)),
        }
    }
}

impl Serialize for PLLift {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MapFile::from_lift(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PLLift {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let file = MapFile::deserialize(deserializer)?;
        if file.kind == Some(MapKind::Interval) {
            return Err(serde::de::Error::custom("expected a lift, found an interval map"));
        }
        PLLift::new(file.degree, file.vertices).map_err(serde::de::Error::custom)
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Pretty JSON with a trailing newline.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    fs::write(path, to_json_string(value)?)?;
    Ok(())
}

pub fn read_map(path: &Path) -> Result<LoadedMap> {
    let file: MapFile = read_json(path)?;
    file.decode()
}

pub fn read_lift(path: &Path) -> Result<PLLift> {
    match read_map(path)? {
        LoadedMap::Lift(m) => Ok(m),
        LoadedMap::Interval(_) => Err(Error::InvalidArgument(format!("{} holds an interval map", path.display()))),
    }
}

/// Envelope shared by every report: schema and library version plus the
/// configuration that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report<C, B> {
    pub schema_version: u32,
    pub version: String,
    pub config: C,
    pub result: B,
}

impl<C, B> Report<C, B> {
    pub fn new(config: C, result: B) -> Self {
        Report { schema_version: SCHEMA_VERSION, version: crate::VERSION.to_string(), config, result }
    }
}
