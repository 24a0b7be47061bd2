//! CSV and JSON files for discrete functions, spectra and kernels.
//!
//! CSV layout:
//!
//! ```text
//! # algebra=A2 m=3 kind=C
//! s0,s1,s2,sector,re,im
//! 3,0,0,F,1,0
//! ```
//!
//! Spectra use `t0,t1,t2` columns. Kernels add `kernel=<name> mode=<mode>` to
//! the header. Floats are written in shortest round-trip form.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraId;
use crate::convolution::{Kernel, NormalizationMode};
use crate::error::{Error, Result};
use crate::grids::{Grid, GridKind, Sector};
use crate::transforms::{DiscreteFunction, OrbitBasis, Spectrum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Content {
    Function,
    Spectrum,
}

impl Content {
    fn columns(self) -> &'static str {
        match self {
            Content::Function => "s0,s1,s2,sector,re,im",
            Content::Spectrum => "t0,t1,t2,sector,re,im",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub coords: [u32; 3],
    pub sector: Sector,
    pub re: f64,
    pub im: f64,
}

/// Serialized form shared by both formats.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub algebra: AlgebraId,
    pub m: u32,
    pub kind: GridKind,
    pub content: Content,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<NormalizationMode>,
    pub entries: Vec<Entry>,
}

fn keys(grid: &Grid, content: Content) -> Vec<([u32; 3], Sector)> {
    match content {
        Content::Function => grid.points().iter().map(|p| (p.base().s(), p.sector())).collect(),
        Content::Spectrum => grid.labels().iter().map(|l| (l.base().t(), l.sector())).collect(),
    }
}

fn build(algebra: AlgebraId, m: u32, kind: GridKind, content: Content, values: &[Complex64]) -> Result<Record> {
    let basis = OrbitBasis::shared(algebra, m, kind)?;
    let entries = keys(basis.grid(), content)
        .into_iter()
        .zip(values)
        .map(|((coords, sector), v)| Entry { coords, sector, re: v.re, im: v.im })
        .collect();
    Ok(Record { algebra, m, kind, content, kernel: None, mode: None, entries })
}

impl Record {
    pub fn from_function(f: &DiscreteFunction) -> Result<Self> {
        build(f.algebra, f.m, f.kind, Content::Function, &f.values)
    }

    pub fn from_spectrum(s: &Spectrum) -> Result<Self> {
        build(s.algebra, s.m, s.kind, Content::Spectrum, &s.coeffs)
    }

    pub fn from_kernel(k: &Kernel) -> Result<Self> {
        let mut r = Record::from_function(&k.function)?;
        r.kernel = Some(k.name.clone());
        r.mode = Some(k.mode);
        Ok(r)
    }

    /// Values in grid order; every grid entry must appear exactly once.
    fn values(&self, content: Content) -> Result<Vec<Complex64>> {
        if self.content != content {
            return Err(Error::Parse(format!("expected {content:?} data, found {:?}", self.content)));
        }
        let basis = OrbitBasis::shared(self.algebra, self.m, self.kind)?;
        let index: HashMap<_, _> = keys(basis.grid(), content)
            .into_iter()
            .enumerate()
            .map(|(i, k)| (k, i))
            .collect();
        let mut values = vec![None; index.len()];
        for e in &self.entries {
            let i = *index.get(&(e.coords, e.sector)).ok_or_else(|| {
                Error::Parse(format!("{:?}/{} is not on the {} {} grid at M = {}", e.coords, e.sector.as_str(), self.algebra, self.kind, self.m))
            })?;
            if values[i].replace(Complex64::new(e.re, e.im)).is_some() {
                return Err(Error::Parse(format!("duplicate entry {:?}/{}", e.coords, e.sector.as_str())));
            }
        }
        values
            .into_iter()
            .zip(keys(basis.grid(), content))
            .map(|(v, (c, s))| v.ok_or_else(|| Error::Parse(format!("missing entry {c:?}/{}", s.as_str()))))
            .collect()
    }

    pub fn to_function(&self) -> Result<DiscreteFunction> {
        DiscreteFunction::new(self.algebra, self.m, self.kind, self.values(Content::Function)?)
    }

    pub fn to_spectrum(&self) -> Result<Spectrum> {
        Spectrum::new(self.algebra, self.m, self.kind, self.values(Content::Spectrum)?)
    }

    pub fn to_kernel(&self) -> Result<Kernel> {
        Ok(Kernel {
            name: self.kernel.clone().unwrap_or_else(|| "custom".into()),
            mode: self.mode.unwrap_or(NormalizationMode::None),
            function: self.to_function()?,
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("# algebra={} m={} kind={}", self.algebra, self.m, self.kind);
        if let Some(k) = &self.kernel {
            let _ = write!(out, " kernel={k}");
        }
        if let Some(mode) = self.mode {
            let _ = write!(out, " mode={}", mode.as_str());
        }
        out.push('\n');
        out.push_str(self.content.columns());
        out.push('\n');
        for e in &self.entries {
            let [a, b, c] = e.coords;
            let _ = writeln!(out, "{a},{b},{c},{},{},{}", e.sector.as_str(), e.re, e.im);
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .and_then(|l| l.strip_prefix('#'))
            .ok_or_else(|| Error::Parse("missing '# algebra=.. m=.. kind=..' header".into()))?;
        let mut fields = HashMap::new();
        for item in header.split_whitespace() {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad header field '{item}'")))?;
            fields.insert(k, v);
        }
        let field = |k: &str| fields.get(k).copied().ok_or_else(|| Error::Parse(format!("header lacks '{k}'")));
        let algebra: AlgebraId = field("algebra")?.parse()?;
        let m: u32 = field("m")?
            .parse()
            .map_err(|_| Error::Parse(format!("bad grid density '{}'", fields["m"])))?;
        let kind: GridKind = field("kind")?.parse()?;
        let kernel = fields.get("kernel").map(|s| s.to_string());
        let mode = fields.get("mode").map(|s| s.parse()).transpose()?;

        let columns = lines.next().ok_or_else(|| Error::Parse("missing column line".into()))?;
        let content = match columns.replace(' ', "").as_str() {
            c if c == Content::Function.columns() => Content::Function,
            c if c == Content::Spectrum.columns() => Content::Spectrum,
            other => return Err(Error::Parse(format!("unexpected columns '{other}'"))),
        };
        let entries = lines
            .map(|line| {
                let cells: Vec<&str> = line.split(',').map(str::trim).collect();
                if cells.len() != 6 {
                    return Err(Error::Parse(format!("expected 6 fields in '{line}'")));
                }
                let int = |s: &str| s.parse::<u32>().map_err(|_| Error::Parse(format!("bad coordinate '{s}'")));
                let float = |s: &str| s.parse::<f64>().map_err(|_| Error::Parse(format!("bad number '{s}'")));
                Ok(Entry {
                    coords: [int(cells[0])?, int(cells[1])?, int(cells[2])?],
                    sector: Sector::parse(cells[3])?,
                    re: float(cells[4])?,
                    im: float(cells[5])?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Record { algebra, m, kind, content, kernel, mode, entries })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Grid points with their real coordinates and ε weights.
pub fn grid_info_csv(grid: &Grid) -> String {
    let mut out = format!("# algebra={} m={} kind={}\n", grid.algebra(), grid.m(), grid.kind());
    out.push_str("s0,s1,s2,sector,x1,x2,epsilon\n");
    let m = f64::from(grid.m());
    for ((p, s), e) in grid.points().iter().zip(grid.lattice()).zip(grid.epsilons()) {
        let [a, b, c] = p.base().s();
        let _ = writeln!(out, "{a},{b},{c},{},{},{},{e}", p.sector().as_str(), s[0] as f64 / m, s[1] as f64 / m);
    }
    out
}

/// Labels with their weights in the ω basis and `h∨` values.
pub fn label_info_csv(grid: &Grid) -> String {
    let mut out = format!("# algebra={} m={} kind={}\n", grid.algebra(), grid.m(), grid.kind());
    out.push_str("t0,t1,t2,sector,l1,l2,h\n");
    for ((l, w), h) in grid.labels().iter().zip(grid.weights()).zip(grid.hs()) {
        let [a, b, c] = l.base().t();
        let _ = writeln!(out, "{a},{b},{c},{},{},{},{h}", l.sector().as_str(), w[0], w[1]);
    }
    out
}
