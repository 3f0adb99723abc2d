//! On-disk cache of enumerated affine places.
//!
//! File layout:
//!
//! ```text
//! soag-points family=gk q=2 n=3 modulus=<hash> count=224
//! 0 0 0
//! 1 0 ...
//! ```
//!
//! One line per place with the encodings of its coordinates (two for ABQ).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use super::{verify_places, AffinePlace, CurveDescriptor, CurveInstance};
use crate::error::{Error, Result};
use crate::field::Gf;

pub const CACHE_DIR_ENV: &str = "SOAG_CACHE_DIR";
pub const DEFAULT_CACHE_DIR: &str = ".soag-cache";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheOutcome {
    Hit,
    Miss,
    /// A file existed but failed validation and was rewritten.
    Rebuilt,
}

#[derive(Clone, Debug)]
pub struct PointCache {
    dir: PathBuf,
}

impl PointCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    /// Directory from `SOAG_CACHE_DIR`, else `.soag-cache`.
    pub fn from_env() -> Self {
        Self::new(std::env::var_os(CACHE_DIR_ENV).map_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR), PathBuf::from))
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, desc: &CurveDescriptor) -> PathBuf {
        self.dir.join(format!("{}-q{}-n{}.points", desc.family_name(), desc.q, desc.n))
    }

    fn header(desc: &CurveDescriptor, f: &Gf, count: usize) -> String {
        format!(
            "soag-points family={} q={} n={} modulus={} count={}",
            desc.family_name(),
            desc.q,
            desc.n,
            f.spec().modulus_hash(),
            count
        )
    }

    /// Reads and validates a cache file. `Ok(None)` when absent.
    pub fn load(&self, desc: &CurveDescriptor, f: &Gf) -> Result<Option<Vec<AffinePlace>>> {
        let path = self.path_for(desc);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Cache("empty file".into()))?;
        let count = header
            .rsplit_once("count=")
            .and_then(|(_, c)| c.parse::<usize>().ok())
            .ok_or_else(|| Error::Cache("header lacks a count".into()))?;
        if header != Self::header(desc, f, count) {
            return Err(Error::Cache(format!("header mismatch: {header}")));
        }
        let mut places = Vec::with_capacity(count);
        for (i, line) in lines.enumerate() {
            let coords: Vec<u32> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| Error::Cache(format!("line {}: bad integer `{t}`", i + 2))))
                .collect::<Result<_>>()?;
            if coords.len() != desc.arity || coords.iter().any(|&c| !f.contains(c)) {
                return Err(Error::Cache(format!("line {}: malformed place", i + 2)));
            }
            let mut pt = [0; 3];
            pt[..desc.arity].copy_from_slice(&coords);
            places.push(AffinePlace(pt));
        }
        if places.len() != count {
            return Err(Error::Cache(format!("header count {count}, file has {}", places.len())));
        }
        if !places.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Cache("places not in canonical order".into()));
        }
        verify_places(f, desc, &places).map_err(|e| Error::Cache(e.to_string()))?;
        Ok(Some(places))
    }

    pub fn store(&self, desc: &CurveDescriptor, f: &Gf, places: &[AffinePlace]) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let mut out = String::with_capacity(places.len() * 16);
        out.push_str(&Self::header(desc, f, places.len()));
        out.push('\n');
        for pt in places {
            let coords: Vec<String> = pt.0[..desc.arity].iter().map(u32::to_string).collect();
            out.push_str(&coords.join(" "));
            out.push('\n');
        }
        let path = self.path_for(desc);
        let tmp = path.with_extension("tmp");
        fs::File::create(&tmp)?.write_all(out.as_bytes())?;
        fs::rename(tmp, path)?;
        Ok(())
    }

    /// Loads places from the cache, enumerating and storing on a miss or a
    /// corrupt file.
    pub fn instance(&self, desc: CurveDescriptor) -> Result<(CurveInstance, CacheOutcome)> {
        let field = desc.build_field()?;
        let (places, outcome) = match self.load(&desc, &field) {
            Ok(Some(p)) if p.len() as u64 + desc.infinite.count as u64 == desc.expected_places => {
                (p, CacheOutcome::Hit)
            }
            Ok(None) => (super::enumerate_affine_places(&field, &desc)?, CacheOutcome::Miss),
            _ => (super::enumerate_affine_places(&field, &desc)?, CacheOutcome::Rebuilt),
        };
        if outcome != CacheOutcome::Hit {
            self.store(&desc, &field, &places)?;
        }
        Ok((CurveInstance { descriptor: desc, field, places }, outcome))
    }
}
