//! Function-spec strings and field configuration.
//!
//! Grammar: `<name>[:<key>=<value>[,<key>=<value>]...]`, where name is one of
//! `power gold kasami welch niho inverse dobbertin tracequad1 tracequad2
//! dillon6`, or `table:<path>` for a truth table file (one hex value per
//! line, 2^n lines). Every form accepts an optional `n=<int>` parameter.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::families::{Family, FamilySpec};
use crate::field::{Elem, FieldSpec};
use crate::vbf::TruthTable;

/// Decimal, or hexadecimal with a `0x` prefix.
pub fn parse_uint(s: &str) -> Result<u64> {
    let s = s.trim();
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|_| Error::Parse(format!("expected an integer, got `{s}`")))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FunctionKind {
    Power { d: u64 },
    Family(Family),
    Table(PathBuf),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionSpec {
    pub kind: FunctionKind,
    /// `n` given inside the spec string
    pub n: Option<u32>,
}

fn narrow<T: TryFrom<u64>>(key: &str, v: u64) -> Result<T> {
    T::try_from(v).map_err(|_| Error::validation(format!("{key}={v} out of range")))
}

impl FunctionSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let (name, rest) = text.split_once(':').unwrap_or((text, ""));
        let name = name.to_ascii_lowercase();
        if name == "table" {
            if rest.is_empty() {
                return Err(Error::Parse("table: needs a file path".into()));
            }
            return Ok(FunctionSpec {
                kind: FunctionKind::Table(PathBuf::from(rest)),
                n: None,
            });
        }
        let mut params = BTreeMap::new();
        for item in rest.split(',').filter(|s| !s.trim().is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got `{item}`")))?;
            let key = k.trim().to_ascii_lowercase();
            if params.insert(key.clone(), parse_uint(v)?).is_some() {
                return Err(Error::Parse(format!("parameter `{key}` given twice")));
            }
        }
        let mut take = |key: &str| params.remove(key);
        let n = take("n").map(|v| narrow::<u32>("n", v)).transpose()?;
        let required = |v: Option<u64>, key: &str| {
            v.ok_or_else(|| Error::Parse(format!("`{name}` needs {key}=<int>")))
        };
        let kind = match name.as_str() {
            "power" => FunctionKind::Power {
                d: required(take("d"), "d")?,
            },
            "gold" => FunctionKind::Family(Family::Gold {
                k: narrow("k", required(take("k"), "k")?)?,
            }),
            "kasami" => FunctionKind::Family(Family::Kasami {
                k: narrow("k", required(take("k"), "k")?)?,
            }),
            "welch" => FunctionKind::Family(Family::Welch),
            "niho" => FunctionKind::Family(Family::Niho),
            "inverse" => FunctionKind::Family(Family::Inverse),
            "dobbertin" => FunctionKind::Family(Family::Dobbertin),
            "tracequad1" => FunctionKind::Family(Family::TraceQuad1 {
                a: take("a").map(|a| narrow("a", a)).transpose()?,
            }),
            "tracequad2" => FunctionKind::Family(Family::TraceQuad2 {
                a: take("a").map(|a| narrow("a", a)).transpose()?,
            }),
            "dillon6" => FunctionKind::Family(Family::Dillon6),
            other => return Err(Error::Parse(format!("unknown function `{other}`"))),
        };
        if let Some(key) = params.keys().next() {
            return Err(Error::Parse(format!("`{name}` takes no parameter `{key}`")));
        }
        Ok(FunctionSpec { kind, n })
    }

    /// n from the spec string, the family default or the caller, which must agree.
    pub fn resolve_n(&self, cli_n: Option<u32>) -> Result<u32> {
        let implied = match &self.kind {
            FunctionKind::Family(Family::Dillon6) => Some(6),
            FunctionKind::Table(path) => Some(read_table(path)?.n()),
            _ => None,
        };
        let mut n = None;
        for candidate in [self.n, implied, cli_n].into_iter().flatten() {
            match n {
                Some(prev) if prev != candidate => {
                    return Err(Error::validation(format!(
                        "conflicting dimensions n = {prev} and n = {candidate}"
                    )))
                }
                _ => n = Some(candidate),
            }
        }
        n.ok_or_else(|| Error::validation("this function needs an explicit n (use --n)"))
    }

    pub fn instantiate(&self, cli_n: Option<u32>, fields: &FieldConfig) -> Result<Instance> {
        let n = self.resolve_n(cli_n)?;
        let field = fields.field(n)?;
        let (table, param, label) = match &self.kind {
            FunctionKind::Power { d } => {
                if n > crate::vbf::MAX_VARS {
                    return Err(Error::Capability(format!(
                        "truth tables are limited to n <= {}",
                        crate::vbf::MAX_VARS
                    )));
                }
                (TruthTable::from_power(&field, *d), None, format!("power:d={d},n={n}"))
            }
            FunctionKind::Family(family) => {
                let spec = FamilySpec::new(*family, n)?;
                if n > crate::vbf::MAX_VARS {
                    return Err(Error::Capability(format!(
                        "truth tables are limited to n <= {}",
                        crate::vbf::MAX_VARS
                    )));
                }
                let (table, param) = spec.build_with_info(&field)?;
                (table, param, canonical_family(*family, n, param))
            }
            FunctionKind::Table(path) => {
                (read_table(path)?, None, format!("table:{}", path.display()))
            }
        };
        Ok(Instance {
            label,
            n,
            field,
            table,
            param,
            cacheable: !matches!(self.kind, FunctionKind::Table(_)),
        })
    }
}

fn canonical_family(family: Family, n: u32, param: Option<Elem>) -> String {
    let name = family.name().to_ascii_lowercase();
    match family {
        Family::Gold { k } | Family::Kasami { k } => format!("{name}:k={k},n={n}"),
        Family::TraceQuad1 { .. } | Family::TraceQuad2 { .. } => {
            format!("{name}:a={:#x},n={n}", param.unwrap_or(0))
        }
        _ => format!("{name}:n={n}"),
    }
}

impl fmt::Display for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            FunctionKind::Power { d } => write!(f, "power:d={d}")?,
            FunctionKind::Table(p) => return write!(f, "table:{}", p.display()),
            FunctionKind::Family(fam) => {
                let name = fam.name().to_ascii_lowercase();
                match fam {
                    Family::Gold { k } | Family::Kasami { k } => write!(f, "{name}:k={k}")?,
                    Family::TraceQuad1 { a: Some(a) } | Family::TraceQuad2 { a: Some(a) } => {
                        write!(f, "{name}:a={a:#x}")?
                    }
                    _ => write!(f, "{name}")?,
                }
            }
        }
        if let Some(n) = self.n {
            let sep = match &self.kind {
                FunctionKind::Power { .. }
                | FunctionKind::Family(
                    Family::Gold { .. }
                    | Family::Kasami { .. }
                    | Family::TraceQuad1 { a: Some(_) }
                    | Family::TraceQuad2 { a: Some(_) },
                ) => ',',
                _ => ':',
            };
            write!(f, "{sep}n={n}")?;
        }
        Ok(())
    }
}

/// A function ready for analysis.
#[derive(Clone, Debug)]
pub struct Instance {
    /// canonical spec with defaults filled in
    pub label: String,
    pub n: u32,
    pub field: FieldSpec,
    pub table: TruthTable,
    /// `a` for trace families, the primitive element for Dillon6
    pub param: Option<Elem>,
    pub cacheable: bool,
}

/// Reads a truth table: one hex value per line, `#` comments, 2^n lines.
pub fn read_table(path: &Path) -> Result<TruthTable> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_table(&text)
}

pub fn parse_table(text: &str) -> Result<TruthTable> {
    let values = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(crate::sidon::parse_hex)
        .collect::<Result<Vec<_>>>()?;
    if values.len() < 2 || !values.len().is_power_of_two() {
        return Err(Error::validation(format!(
            "truth table needs 2^n lines with n >= 1, got {}",
            values.len()
        )));
    }
    TruthTable::new(values.len().trailing_zeros(), values)
}

/// Per-dimension modulus overrides.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FieldConfig {
    pub moduli: BTreeMap<u32, u32>,
}

impl FieldConfig {
    /// Accepts `modulus.<n> = <int>` lines (with `#` comments) or JSON
    /// `{"modulus": {"<n>": "<int>" | <int>}}`.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            return Self::parse_json(text);
        }
        let mut moduli = BTreeMap::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key = value, got `{line}`")))?;
            let n = key
                .trim()
                .strip_prefix("modulus.")
                .ok_or_else(|| Error::Parse(format!("unknown config key `{}`", key.trim())))?;
            let n = narrow::<u32>("n", parse_uint(n)?)?;
            moduli.insert(n, narrow("modulus", parse_uint(value)?)?);
        }
        Ok(FieldConfig { moduli })
    }

    fn parse_json(text: &str) -> Result<Self> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("config JSON: {e}")))?;
        let mut moduli = BTreeMap::new();
        if let Some(map) = value.get("modulus") {
            let map = map
                .as_object()
                .ok_or_else(|| Error::Parse("`modulus` must be an object".into()))?;
            for (k, v) in map {
                let n = narrow::<u32>("n", parse_uint(k)?)?;
                let m = match v {
                    serde_json::Value::String(s) => parse_uint(s)?,
                    serde_json::Value::Number(x) => x
                        .as_u64()
                        .ok_or_else(|| Error::Parse(format!("bad modulus for n = {n}")))?,
                    _ => return Err(Error::Parse(format!("bad modulus for n = {n}"))),
                };
                moduli.insert(n, narrow("modulus", m)?);
            }
        }
        Ok(FieldConfig { moduli })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn with_modulus(mut self, n: u32, modulus: u32) -> Self {
        self.moduli.insert(n, modulus);
        self
    }

    pub fn field(&self, n: u32) -> Result<FieldSpec> {
        match self.moduli.get(&n) {
            Some(&m) => FieldSpec::with_modulus(n, m),
            None => FieldSpec::new(n),
        }
    }
}
