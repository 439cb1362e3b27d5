//! File formats: behavior, topology and strategy JSON, and float formatting.
//!
//! Every float written by this crate goes through [`format_f64`]: plain
//! decimal with 17 significant digits, so files round-trip bit-exactly and
//! identical inputs give byte-identical output.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::behavior::{Behavior, Scenario};
use crate::network::NetworkTopology;
use crate::strategy::{build, CanonicalFamily, CanonicalStrategy, ChainVariant, SourceModel};
use crate::witness::Family;
use crate::{Error, Result};

/// Decimal rendering with 17 significant digits; scientific notation outside
/// `[1e-5, 1e17)`.
pub fn format_f64(v: f64) -> String {
    if v == 0.0 {
        return if v.is_sign_negative() { "-0.0".into() } else { "0.0".into() };
    }
    if !v.is_finite() {
        return if v.is_nan() { "NaN".into() } else if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let exp = v.abs().log10().floor() as i32;
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp).max(1) as usize;
        format!("{v:.decimals$}")
    } else {
        format!("{v:.16e}")
    }
}

struct Fixed17<'a>(PrettyFormatter<'a>);

impl Formatter for Fixed17<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            w.write_all(format_f64(value).as_bytes())
        } else {
            w.write_all(b"null")
        }
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Pretty-printed JSON with fixed float formatting and a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Fixed17(PrettyFormatter::with_indent(b"  ")));
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    String::from_utf8(buf).map_err(|e| Error::Internal(e.to_string()))
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    from_json(&read_text(path)?)
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, to_json(value)?)?;
    Ok(())
}

/// `{"scenario": {"parties": [...]}, "probabilities": [...]}`, probabilities
/// flat with inputs outermost and parties in the listed order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BehaviorFile {
    pub scenario: Scenario,
    pub probabilities: Vec<f64>,
}

impl From<&Behavior> for BehaviorFile {
    fn from(b: &Behavior) -> Self {
        BehaviorFile { scenario: b.scenario().clone(), probabilities: b.table().to_vec() }
    }
}

impl TryFrom<BehaviorFile> for Behavior {
    type Error = Error;

    fn try_from(f: BehaviorFile) -> Result<Self> {
        Behavior::new(f.scenario, f.probabilities).map_err(|e| match e {
            Error::InvalidArgument(m) => Error::Schema(m),
            other => other,
        })
    }
}

pub fn behavior_to_json(b: &Behavior) -> Result<String> {
    to_json(&BehaviorFile::from(b))
}

pub fn behavior_from_json(text: &str) -> Result<Behavior> {
    from_json::<BehaviorFile>(text)?.try_into()
}

pub fn read_behavior(path: &Path) -> Result<Behavior> {
    behavior_from_json(&read_text(path)?)
}

pub fn read_topology(path: &Path) -> Result<NetworkTopology> {
    read_json(path)
}

/// Canonical strategy families as named in strategy files and on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategyKind {
    Bilocal,
    LinearB3,
    ChainIj,
    ChainBn,
    StarIj,
    StarSvetlichny,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 6] = [
        StrategyKind::Bilocal,
        StrategyKind::LinearB3,
        StrategyKind::ChainIj,
        StrategyKind::ChainBn,
        StrategyKind::StarIj,
        StrategyKind::StarSvetlichny,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            StrategyKind::Bilocal => "bilocal",
            StrategyKind::LinearB3 => "linear_b3",
            StrategyKind::ChainIj => "chain_ij",
            StrategyKind::ChainBn => "chain_bn",
            StrategyKind::StarIj => "star_ij",
            StrategyKind::StarSvetlichny => "star_svetlichny",
        }
    }

    pub fn canonical(&self) -> CanonicalFamily {
        match self {
            StrategyKind::Bilocal => CanonicalFamily::Bilocal,
            StrategyKind::LinearB3 => CanonicalFamily::LinearB3,
            StrategyKind::ChainIj => CanonicalFamily::Chain(ChainVariant::Ij),
            StrategyKind::ChainBn => CanonicalFamily::Chain(ChainVariant::Bn),
            StrategyKind::StarIj => CanonicalFamily::Star { linear: false },
            StrategyKind::StarSvetlichny => CanonicalFamily::Star { linear: true },
        }
    }

    pub fn witness(&self) -> Family {
        match self {
            StrategyKind::Bilocal => Family::BilocalIj,
            StrategyKind::LinearB3 => Family::LinearB3,
            StrategyKind::ChainIj => Family::ChainIj,
            StrategyKind::ChainBn => Family::LinearBn,
            StrategyKind::StarIj => Family::StarIj,
            StrategyKind::StarSvetlichny => Family::StarSvetlichny,
        }
    }

    /// Witness size for a strategy with `sources` sources.
    pub fn n(&self, sources: usize) -> usize {
        match self {
            StrategyKind::StarIj | StrategyKind::StarSvetlichny => sources,
            _ => sources + 1,
        }
    }

    /// Source count for witness size `n`.
    pub fn sources_for(&self, n: usize) -> usize {
        match self {
            StrategyKind::StarIj | StrategyKind::StarSvetlichny => n,
            _ => n.saturating_sub(1),
        }
    }
}

impl std::str::FromStr for StrategyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StrategyKind::ALL
            .iter()
            .copied()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown strategy family {s}")))
    }
}

/// Canonical strategy by angles: `{"family", "thetas", "visibilities"?, "vartheta"?}`.
/// Missing visibilities mean pure sources.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategySpec {
    pub family: StrategyKind,
    pub thetas: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub visibilities: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vartheta: Option<f64>,
}

impl StrategySpec {
    pub fn sources(&self) -> Result<Vec<SourceModel>> {
        let vis = match &self.visibilities {
            Some(v) if v.len() != self.thetas.len() => {
                return Err(Error::arg(format!("{} visibilities for {} sources", v.len(), self.thetas.len())))
            }
            Some(v) => v.clone(),
            None => vec![1.0; self.thetas.len()],
        };
        let sources: Vec<SourceModel> =
            self.thetas.iter().zip(vis).map(|(&theta, visibility)| SourceModel::Quantum { theta, visibility }).collect();
        for s in &sources {
            s.validate()?;
        }
        Ok(sources)
    }

    pub fn build(&self) -> Result<CanonicalStrategy> {
        build(self.family.canonical(), self.sources()?, self.vartheta)
    }

    pub fn n(&self) -> usize {
        self.family.n(self.thetas.len())
    }
}

/// One source model per topology source, in topology order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkStrategy {
    pub sources: Vec<SourceModel>,
}
