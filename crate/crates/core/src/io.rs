//! The MSLR1 instance file.
//!
//! Line 1 is a comma-separated `key=value` metadata record. Each following
//! line holds one sample: the p entries of the design row, then y, then z,
//! with z = −1 when the labels are withheld. Floats are written with 17
//! significant digits in scientific notation, so a written file reads back
//! bit-exactly and rewriting it reproduces the same bytes.
//!
//! Metadata keys, in write order: `format, n, p, k, sigma, phi, seed, xi, tau,
//! tag, values`, then the optional `beta1` and `beta2` (sparse `j:v` entries
//! joined by `;`) carrying the ground truth for evaluation.

use crate::error::{Error, Result};
use crate::gen::{DetectionSample, Hypothesis, Instance};
use crate::model::{ModelParams, SignalPair, ValueSet};
use nalgebra::DMatrix;
use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

pub const FORMAT: &str = "MSLR1";

/// Whether the file holds a recovery instance or a detection sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tag {
    Recovery,
    Detection(Hypothesis),
}

impl std::fmt::Display for Tag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tag::Recovery => f.write_str("recovery"),
            Tag::Detection(h) => write!(f, "{h}"),
        }
    }
}

impl std::str::FromStr for Tag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "recovery" => Ok(Tag::Recovery),
            other => Ok(Tag::Detection(other.parse()?)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Metadata {
    pub n: usize,
    pub p: usize,
    pub k: usize,
    pub sigma: f64,
    pub phi: f64,
    pub seed: u64,
    pub xi: f64,
    pub tau: f64,
    pub tag: Tag,
    pub value_set: ValueSet,
    pub beta1: Option<Vec<f64>>,
    pub beta2: Option<Vec<f64>>,
}

impl Metadata {
    pub fn params(&self) -> Result<ModelParams> {
        ModelParams::new(self.p, self.n, self.k, self.sigma, self.phi, self.value_set.clone())
    }

    /// Ground-truth signals when both vectors are recorded.
    pub fn signals(&self) -> Option<SignalPair> {
        match (&self.beta1, &self.beta2) {
            (Some(a), Some(b)) => SignalPair::from_vectors(a.clone(), b.clone()).ok(),
            _ => None,
        }
    }
}

/// In-memory form of one MSLR1 file.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceFile {
    pub meta: Metadata,
    pub x: DMatrix<f64>,
    pub y: Vec<f64>,
    /// −1 where labels are withheld.
    pub z: Vec<i8>,
}

impl InstanceFile {
    pub fn from_instance(inst: &Instance) -> Self {
        InstanceFile {
            meta: meta_from(&inst.params, &inst.signals, inst.seed, Tag::Recovery),
            x: inst.x.clone(),
            y: inst.y.clone(),
            z: inst.z.iter().map(|&v| v as i8).collect(),
        }
    }

    /// Labels are withheld; the signals stay in the metadata for evaluation.
    pub fn from_detection(s: &DetectionSample) -> Self {
        InstanceFile {
            meta: meta_from(&s.params, &s.signals, s.seed, Tag::Detection(s.hypothesis)),
            x: s.x.clone(),
            y: s.y.clone(),
            z: vec![-1; s.y.len()],
        }
    }

    /// Labels in {0, 1}, or `None` if any is withheld.
    pub fn labels(&self) -> Option<Vec<u8>> {
        self.z.iter().map(|&v| u8::try_from(v).ok().filter(|v| *v <= 1)).collect()
    }

    pub fn write_to(&self, mut w: impl Write) -> Result<()> {
        let (n, p) = self.x.shape();
        if self.y.len() != n || self.z.len() != n || self.meta.n != n || self.meta.p != p {
            return Err(Error::DimensionMismatch("instance file fields disagree on (n, p)".into()));
        }
        let mut out = String::new();
        out.push_str(&self.meta.encode());
        out.push('\n');
        let mut line = String::new();
        for i in 0..n {
            line.clear();
            for j in 0..p {
                push_float(&mut line, self.x[(i, j)]);
                line.push(',');
            }
            push_float(&mut line, self.y[i]);
            let _ = write!(line, ",{}", self.z[i]);
            out.push_str(&line);
            out.push('\n');
        }
        w.write_all(out.as_bytes())?;
        Ok(())
    }

    pub fn read_from(r: impl Read) -> Result<Self> {
        let mut lines = BufReader::new(r).lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty instance file".into()))??;
        let meta = Metadata::decode(&header)?;
        let (n, p) = (meta.n, meta.p);
        let mut x = DMatrix::<f64>::zeros(n, p);
        let mut y = Vec::with_capacity(n);
        let mut z = Vec::with_capacity(n);
        for i in 0..n {
            let line = lines.next().ok_or_else(|| Error::Parse(format!("expected {n} data lines, found {i}")))??;
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != p + 2 {
                return Err(Error::Parse(format!("line {}: expected {} fields, found {}", i + 2, p + 2, fields.len())));
            }
            for j in 0..p {
                x[(i, j)] = parse_f64(fields[j])?;
            }
            y.push(parse_f64(fields[p])?);
            let zi: i8 = fields[p + 1].trim().parse().map_err(|e| Error::Parse(format!("line {}: z: {e}", i + 2)))?;
            if !(-1..=1).contains(&zi) {
                return Err(Error::Parse(format!("line {}: z = {zi} outside {{-1, 0, 1}}", i + 2)));
            }
            z.push(zi);
        }
        for rest in lines {
            if !rest?.trim().is_empty() {
                return Err(Error::Parse(format!("more than {n} data lines")));
            }
        }
        Ok(InstanceFile { meta, x, y, z })
    }

    pub fn write_path(&self, path: impl AsRef<Path>) -> Result<()> {
        let f = std::fs::File::create(path)?;
        self.write_to(std::io::BufWriter::new(f))
    }

    pub fn read_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::read_from(std::fs::File::open(path)?)
    }
}

fn meta_from(params: &ModelParams, signals: &SignalPair, seed: u64, tag: Tag) -> Metadata {
    Metadata {
        n: params.n,
        p: params.p,
        k: params.k,
        sigma: params.sigma,
        phi: params.phi,
        seed,
        xi: signals.xi,
        tau: signals.tau,
        tag,
        value_set: params.value_set.clone(),
        beta1: Some(signals.beta1.clone()),
        beta2: Some(signals.beta2.clone()),
    }
}

/// 17 significant digits; round-trips every finite f64.
pub fn format_float(v: f64) -> String {
    let mut s = String::new();
    push_float(&mut s, v);
    s
}

fn push_float(s: &mut String, v: f64) {
    let _ = write!(s, "{v:.16e}");
}

fn parse_f64(t: &str) -> Result<f64> {
    t.trim().parse::<f64>().map_err(|e| Error::Parse(format!("{t:?}: {e}")))
}

fn encode_sparse(b: &[f64]) -> String {
    let parts: Vec<String> = b.iter().enumerate().filter(|(_, v)| **v != 0.0).map(|(j, v)| format!("{j}:{}", format_float(*v))).collect();
    parts.join(";")
}

fn decode_sparse(s: &str, p: usize) -> Result<Vec<f64>> {
    let mut out = vec![0.0; p];
    for entry in s.split(';').filter(|e| !e.is_empty()) {
        let (j, v) = entry.split_once(':').ok_or_else(|| Error::Parse(format!("sparse entry {entry:?}")))?;
        let j: usize = j.parse().map_err(|e| Error::Parse(format!("sparse index {j:?}: {e}")))?;
        if j >= p {
            return Err(Error::IndexOutOfRange { index: j, dim: p });
        }
        out[j] = parse_f64(v)?;
    }
    Ok(out)
}

impl Metadata {
    pub fn encode(&self) -> String {
        let mut s = format!(
            "format={FORMAT},n={},p={},k={},sigma={},phi={},seed={},xi={},tau={},tag={},values={}",
            self.n,
            self.p,
            self.k,
            format_float(self.sigma),
            format_float(self.phi),
            self.seed,
            format_float(self.xi),
            format_float(self.tau),
            self.tag,
            self.value_set
        );
        if let Some(b) = &self.beta1 {
            let _ = write!(s, ",beta1={}", encode_sparse(b));
        }
        if let Some(b) = &self.beta2 {
            let _ = write!(s, ",beta2={}", encode_sparse(b));
        }
        s
    }

    pub fn decode(line: &str) -> Result<Self> {
        let mut kv = std::collections::BTreeMap::new();
        for field in line.trim().split(',') {
            let (k, v) = field.split_once('=').ok_or_else(|| Error::Parse(format!("metadata field {field:?} lacks '='")))?;
            kv.insert(k.trim(), v.trim());
        }
        let get = |k: &str| kv.get(k).copied().ok_or_else(|| Error::Parse(format!("metadata key {k:?} missing")));
        if get("format")? != FORMAT {
            return Err(Error::Parse(format!("unsupported format {:?}", get("format")?)));
        }
        let int = |k: &str| -> Result<u64> { get(k)?.parse().map_err(|e| Error::Parse(format!("{k}: {e}"))) };
        let p = int("p")? as usize;
        Ok(Metadata {
            n: int("n")? as usize,
            p,
            k: int("k")? as usize,
            sigma: parse_f64(get("sigma")?)?,
            phi: parse_f64(get("phi")?)?,
            seed: int("seed")?,
            xi: parse_f64(get("xi")?)?,
            tau: parse_f64(get("tau")?)?,
            tag: get("tag")?.parse()?,
            value_set: get("values")?.parse()?,
            beta1: kv.get("beta1").map(|s| decode_sparse(s, p)).transpose()?,
            beta2: kv.get("beta2").map(|s| decode_sparse(s, p)).transpose()?,
        })
    }
}
