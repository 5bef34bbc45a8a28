//! Instance and family files.
//!
//! Everything on disk is JSON with a fixed field order, so serializing the
//! same value twice gives identical bytes and digests can be taken over the
//! compact encoding. Files are written pretty-printed for diffability; the
//! digest ignores that choice.

use std::fs;
use std::path::Path;

use pierce_lab::dinterval::{DIntervalError, DIntervalFamily};
use pierce_lab::geom::{InvalidRect, Point, Rect};
use pierce_lab::trace::Instance;
use pierce_lab::verify::PTInstance;
use pierce_lab::{Coord, COORD_MAX, COORD_MIN};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const FORMAT_VERSION: u32 = 1;

/// One rectangle as stored on disk: closed intervals per axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RectFile {
    pub x: [Coord; 2],
    pub y: [Coord; 2],
}

/// Optional provenance and structure labels carried next to the geometry.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Known piercing origin, when the construction fixes one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub origin: Option<[Coord; 2]>,
    /// Per-rectangle class labels (packing witness structure).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classes: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    /// Oracle-confirmed trace piercing number, for generators that know it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<usize>,
}

impl Metadata {
    pub fn is_empty(&self) -> bool {
        *self == Metadata::default()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub format_version: u32,
    pub points: Vec<[Coord; 2]>,
    pub rects: Vec<RectFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

/// A d-interval family on disk: `members[m][line]` is `[lo, hi]` or null.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DIntervalFile {
    pub format_version: u32,
    pub d: usize,
    pub line_sizes: Vec<usize>,
    pub members: Vec<Vec<Option<[usize; 2]>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

#[derive(Debug, thiserror::Error)]
pub enum FileError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("unsupported format_version {0}, this build reads version {FORMAT_VERSION}")]
    Version(u32),
    #[error("coordinate {0} outside the 63-bit signed range")]
    CoordRange(Coord),
    #[error("rectangle {index}: {source}")]
    BadRect {
        index: usize,
        #[source]
        source: InvalidRect,
    },
    #[error("duplicate point ({0}, {1})")]
    DuplicatePoint(Coord, Coord),
    #[error("metadata.classes has {actual} labels for {expected} rectangles")]
    ClassCount { expected: usize, actual: usize },
    #[error("file lacks {0} metadata required for this command")]
    MissingMetadata(&'static str),
    #[error("invalid family: {0}")]
    BadFamily(#[from] DIntervalError),
    #[error("{0} is neither an instance file nor a d-interval family file")]
    UnknownShape(String),
}

fn coord_ok(c: Coord) -> Result<Coord, FileError> {
    if (COORD_MIN..=COORD_MAX).contains(&c) {
        Ok(c)
    } else {
        Err(FileError::CoordRange(c))
    }
}

impl InstanceFile {
    pub fn from_instance(inst: &Instance<Coord>, metadata: Option<Metadata>) -> Self {
        InstanceFile {
            format_version: FORMAT_VERSION,
            points: inst.points().iter().map(|p| [p.x, p.y]).collect(),
            rects: inst
                .rects()
                .iter()
                .map(|r| RectFile { x: [r.x_lo(), r.x_hi()], y: [r.y_lo(), r.y_hi()] })
                .collect(),
            metadata: metadata.filter(|m| !m.is_empty()),
        }
    }

    /// Validate and build the in-memory instance.
    pub fn to_instance(&self) -> Result<Instance<Coord>, FileError> {
        if self.format_version != FORMAT_VERSION {
            return Err(FileError::Version(self.format_version));
        }
        let mut seen = std::collections::HashSet::new();
        let mut points = Vec::with_capacity(self.points.len());
        for &[x, y] in &self.points {
            if !seen.insert((coord_ok(x)?, coord_ok(y)?)) {
                return Err(FileError::DuplicatePoint(x, y));
            }
            points.push(Point::new(x, y));
        }
        let mut rects = Vec::with_capacity(self.rects.len());
        for (index, rf) in self.rects.iter().enumerate() {
            for c in [rf.x[0], rf.x[1], rf.y[0], rf.y[1]] {
                coord_ok(c)?;
            }
            rects.push(
                Rect::new(rf.x[0], rf.x[1], rf.y[0], rf.y[1])
                    .map_err(|source| FileError::BadRect { index, source })?,
            );
        }
        if let Some(classes) = self.metadata.as_ref().and_then(|m| m.classes.as_ref()) {
            if classes.len() != rects.len() {
                return Err(FileError::ClassCount {
                    expected: rects.len(),
                    actual: classes.len(),
                });
            }
        }
        Ok(Instance::new(points, rects))
    }

    /// Lift a file carrying `d`, `r` and class labels into a packing
    /// witness instance.
    pub fn to_pt_instance(&self) -> Result<PTInstance, FileError> {
        let inst = self.to_instance()?;
        let meta = self.metadata.as_ref();
        let d = meta.and_then(|m| m.d).ok_or(FileError::MissingMetadata("d"))?;
        let r = meta.and_then(|m| m.r).ok_or(FileError::MissingMetadata("r"))?;
        let classes = meta
            .and_then(|m| m.classes.clone())
            .ok_or(FileError::MissingMetadata("classes"))?;
        Ok(PTInstance {
            d,
            r,
            points: inst.points().to_vec(),
            rects: inst.rects().to_vec(),
            classes,
        })
    }

    /// Content digest over the compact canonical encoding, 16 hex chars.
    pub fn digest(&self) -> String {
        digest_bytes(&serde_json::to_vec(self).expect("instance files serialize"))
    }
}

pub fn pt_to_file(pt: &PTInstance) -> InstanceFile {
    let inst = Instance::new(pt.points.clone(), pt.rects.clone());
    InstanceFile::from_instance(
        &inst,
        Some(Metadata {
            d: Some(pt.d),
            r: Some(pt.r),
            classes: Some(pt.classes.clone()),
            ..Metadata::default()
        }),
    )
}

impl DIntervalFile {
    pub fn from_family(fam: &DIntervalFamily, metadata: Option<Metadata>) -> Self {
        DIntervalFile {
            format_version: FORMAT_VERSION,
            d: fam.d(),
            line_sizes: fam.line_sizes().to_vec(),
            members: fam
                .members()
                .iter()
                .map(|m| m.iter().map(|r| r.map(|(lo, hi)| [lo, hi])).collect())
                .collect(),
            metadata: metadata.filter(|m| !m.is_empty()),
        }
    }

    pub fn to_family(&self) -> Result<DIntervalFamily, FileError> {
        if self.format_version != FORMAT_VERSION {
            return Err(FileError::Version(self.format_version));
        }
        let members = self
            .members
            .iter()
            .map(|m| m.iter().map(|r| r.map(|[lo, hi]| (lo, hi))).collect())
            .collect();
        Ok(DIntervalFamily::new(self.d, self.line_sizes.clone(), members)?)
    }

    pub fn digest(&self) -> String {
        digest_bytes(&serde_json::to_vec(self).expect("family files serialize"))
    }
}

fn digest_bytes(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    h.finalize()[..8].iter().map(|b| format!("{b:02x}")).collect()
}

/// Either file shape, distinguished by their required fields.
#[derive(Debug, Clone)]
pub enum AnyFile {
    Instance(InstanceFile),
    DInterval(DIntervalFile),
}

pub fn read_any(path: &Path) -> Result<AnyFile, FileError> {
    let text = read_text(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|source| FileError::Parse { path: path.display().to_string(), source })?;
    fn parse<T: serde::de::DeserializeOwned>(
        path: &Path,
        v: serde_json::Value,
    ) -> Result<T, FileError> {
        serde_json::from_value(v)
            .map_err(|source| FileError::Parse { path: path.display().to_string(), source })
    }
    if value.get("members").is_some() {
        Ok(AnyFile::DInterval(parse(path, value)?))
    } else if value.get("points").is_some() && value.get("rects").is_some() {
        Ok(AnyFile::Instance(parse(path, value)?))
    } else {
        Err(FileError::UnknownShape(path.display().to_string()))
    }
}

pub fn read_instance(path: &Path) -> Result<(Instance<Coord>, InstanceFile), FileError> {
    match read_any(path)? {
        AnyFile::Instance(f) => Ok((f.to_instance()?, f)),
        AnyFile::DInterval(_) => Err(FileError::UnknownShape(format!(
            "{}: expected an instance file, found a d-interval family",
            path.display()
        ))),
    }
}

pub fn read_dinterval(path: &Path) -> Result<(DIntervalFamily, DIntervalFile), FileError> {
    match read_any(path)? {
        AnyFile::DInterval(f) => Ok((f.to_family()?, f)),
        AnyFile::Instance(_) => Err(FileError::UnknownShape(format!(
            "{}: expected a d-interval family file, found an instance",
            path.display()
        ))),
    }
}

fn read_text(path: &Path) -> Result<String, FileError> {
    fs::read_to_string(path)
        .map_err(|source| FileError::Io { path: path.display().to_string(), source })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), FileError> {
    let mut text = serde_json::to_string_pretty(value).expect("report values serialize");
    text.push('\n');
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)
            .map_err(|source| FileError::Io { path: path.display().to_string(), source })?;
    }
    fs::write(path, text)
        .map_err(|source| FileError::Io { path: path.display().to_string(), source })
}
