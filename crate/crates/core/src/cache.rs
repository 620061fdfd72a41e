//! On-disk cache of per-prime field parameters (modulus and root of unity).
//!
//! One plain-text file per prime with `key=value` lines:
//!
//! ```text
//! p=7
//! m=21
//! modulus=gf2x:...
//! beta=gf2x:...
//! ```
//!
//! Nothing read from disk is trusted until it passes the same checks a
//! fresh computation satisfies.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::field::{make_field_with_cap, root_of_unity, FieldCtx, FieldElem, PowerTable};
use crate::gf2x::Gf2Poly;

pub const CACHE_DIR_ENV: &str = "FERMATSEQ_CACHE_DIR";
pub const DEFAULT_CACHE_DIR: &str = "./.fermatseq-cache";

/// The field for `p` together with its primitive `p^2`-th root of unity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldParams {
    pub field: FieldCtx,
    pub beta: FieldElem,
}

impl FieldParams {
    pub fn compute(p: u64, degree_cap: usize) -> Result<FieldParams> {
        let field = make_field_with_cap(p, degree_cap)?;
        let beta = root_of_unity(&field, p * p)?;
        Ok(FieldParams { field, beta })
    }

    pub fn p(&self) -> u64 {
        self.field.prime()
    }

    pub fn power_table(&self) -> PowerTable {
        let p = self.p();
        PowerTable::new(&self.field, &self.beta, p * p).expect("β validated at construction")
    }

    pub fn to_text(&self) -> String {
        format!(
            "p={}\nm={}\nmodulus={}\nbeta={}\n",
            self.p(),
            self.field.degree(),
            self.field.modulus().to_hex(),
            self.beta.residue().to_hex()
        )
    }

    /// Parses and validates cached parameters for `p`.
    pub fn from_text(text: &str, p: u64, degree_cap: usize) -> Result<FieldParams> {
        let (mut fp, mut m, mut modulus, mut beta) = (None, None, None, None);
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad cache line {line:?}")))?;
            let num = || {
                value
                    .parse::<u64>()
                    .map_err(|_| Error::Parse(format!("bad value for {key}: {value:?}")))
            };
            match key {
                "p" => fp = Some(num()?),
                "m" => m = Some(num()?),
                "modulus" => modulus = Some(Gf2Poly::from_hex(value)?),
                "beta" => beta = Some(Gf2Poly::from_hex(value)?),
                _ => return Err(Error::Parse(format!("unknown cache key {key:?}"))),
            }
        }
        let missing = |k: &str| Error::Parse(format!("cache file is missing {k}"));
        let fp = fp.ok_or_else(|| missing("p"))?;
        let m = m.ok_or_else(|| missing("m"))?;
        let modulus = modulus.ok_or_else(|| missing("modulus"))?;
        let beta = beta.ok_or_else(|| missing("beta"))?;
        if fp != p {
            return Err(Error::Parse(format!("cache file is for p = {fp}, not {p}")));
        }
        if m > degree_cap as u64 {
            return Err(Error::Capacity {
                what: "extension degree",
                value: m,
                cap: degree_cap as u64,
            });
        }
        let field = FieldCtx::with_modulus(p, modulus)?;
        if field.degree() as u64 != m {
            return Err(Error::Parse(format!(
                "cached m = {m} but the field degree is {}",
                field.degree()
            )));
        }
        if beta.degree().is_some_and(|d| d >= field.degree()) {
            return Err(Error::Parse("cached β is not reduced".into()));
        }
        let beta = field.elem(&beta);
        if !field.has_order(&beta, p * p) {
            return Err(Error::Parse(format!("cached β does not have order {}", p * p)));
        }
        Ok(FieldParams { field, beta })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheStatus {
    Hit,
    Miss,
    /// A cache file existed but failed validation and was replaced.
    Replaced,
}

#[derive(Clone, Debug)]
pub struct ParamCache {
    dir: PathBuf,
}

impl ParamCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        ParamCache { dir: dir.into() }
    }

    /// Uses `$FERMATSEQ_CACHE_DIR`, falling back to `./.fermatseq-cache`.
    pub fn from_env() -> Self {
        let dir = std::env::var_os(CACHE_DIR_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR));
        ParamCache::new(dir)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, p: u64) -> PathBuf {
        self.dir.join(format!("field-p{p}.txt"))
    }

    fn io(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
        move |source| Error::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    /// Reads and validates the entry for `p`; `Ok(None)` if there is none.
    pub fn load(&self, p: u64, degree_cap: usize) -> Result<Option<FieldParams>> {
        let path = self.path_for(p);
        match std::fs::read_to_string(&path) {
            Ok(text) => FieldParams::from_text(&text, p, degree_cap).map(Some),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(Self::io(&path)(e)),
        }
    }

    pub fn store(&self, params: &FieldParams) -> Result<()> {
        std::fs::create_dir_all(&self.dir).map_err(Self::io(&self.dir))?;
        let path = self.path_for(params.p());
        std::fs::write(&path, params.to_text()).map_err(Self::io(&path))
    }

    pub fn get_or_compute(&self, p: u64, degree_cap: usize) -> Result<(FieldParams, CacheStatus)> {
        let status = match self.load(p, degree_cap) {
            Ok(Some(params)) => return Ok((params, CacheStatus::Hit)),
            Ok(None) => CacheStatus::Miss,
            Err(e @ (Error::Capacity { .. } | Error::Io { .. })) => return Err(e),
            Err(_) => CacheStatus::Replaced,
        };
        let params = FieldParams::compute(p, degree_cap)?;
        self.store(&params)?;
        Ok((params, status))
    }

    /// Removes every cache entry; returns how many files were deleted.
    pub fn clear(&self) -> Result<usize> {
        let entries = match std::fs::read_dir(&self.dir) {
            Ok(entries) => entries,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(0),
            Err(e) => return Err(Self::io(&self.dir)(e)),
        };
        let mut removed = 0;
        for entry in entries {
            let path = entry.map_err(Self::io(&self.dir))?.path();
            let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("");
            if name.starts_with("field-p") && name.ends_with(".txt") {
                std::fs::remove_file(&path).map_err(Self::io(&path))?;
                removed += 1;
            }
        }
        Ok(removed)
    }
}
