//! One-parameter sweeps of canonical strategies, written as CSV.

use std::f64::consts::FRAC_PI_4;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::io::{format_f64, StrategyKind, StrategySpec};
use crate::witness::{evaluate, ClaimKind, Model, WitnessReport};
use crate::{tolerance, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    /// `sin 2θ₁ sin 2θ₂` with `θ₂ = π/4`; two-source families only.
    Product,
    /// Common source angle.
    Theta,
    /// Common visibility.
    Visibility,
}

impl SweepParameter {
    pub fn name(&self) -> &'static str {
        match self {
            SweepParameter::Product => "product",
            SweepParameter::Theta => "theta",
            SweepParameter::Visibility => "visibility",
        }
    }
}

impl std::str::FromStr for SweepParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "product" => Ok(SweepParameter::Product),
            "theta" => Ok(SweepParameter::Theta),
            "visibility" => Ok(SweepParameter::Visibility),
            _ => Err(Error::InvalidArgument(format!("unknown sweep parameter {s}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub family: StrategyKind,
    pub n: usize,
    pub parameter: SweepParameter,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    /// Source angle when it is not the swept parameter.
    pub theta: f64,
    /// Visibility when it is not the swept parameter.
    pub visibility: f64,
}

impl SweepSpec {
    pub fn new(family: StrategyKind, n: usize, parameter: SweepParameter, start: f64, stop: f64, steps: usize) -> Self {
        SweepSpec { family, n, parameter, start, stop, steps, theta: FRAC_PI_4, visibility: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps < 2 {
            return Err(Error::arg(format!("a sweep needs at least 2 steps, got {}", self.steps)));
        }
        if !(self.start < self.stop) {
            return Err(Error::arg(format!("sweep start {} must be below stop {}", self.start, self.stop)));
        }
        let sources = self.family.sources_for(self.n);
        if self.parameter == SweepParameter::Product && sources != 2 {
            return Err(Error::arg("the product sweep needs a two-source family"));
        }
        if self.parameter == SweepParameter::Product && (self.start < 0.0 || self.stop > 1.0) {
            return Err(Error::arg("sin 2θ₁ sin 2θ₂ lies in [0, 1]"));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let h = (self.stop - self.start) / (self.steps - 1) as f64;
        (0..self.steps).map(|k| if k + 1 == self.steps { self.stop } else { self.start + k as f64 * h }).collect()
    }

    /// Strategy at one grid value.
    pub fn strategy_at(&self, p: f64) -> StrategySpec {
        let m = self.family.sources_for(self.n);
        let (thetas, vis) = match self.parameter {
            SweepParameter::Product => (vec![p.asin() / 2.0, FRAC_PI_4], vec![self.visibility; 2]),
            SweepParameter::Theta => (vec![p; m], vec![self.visibility; m]),
            SweepParameter::Visibility => (vec![self.theta; m], vec![p; m]),
        };
        StrategySpec { family: self.family, thetas, visibilities: Some(vis), vartheta: None }
    }
}

/// Rows of a sweep: the swept value, the simulated witness value, the
/// closed-form prediction (empty when unknown), every threshold except the
/// quantum maximum with its violation flag, and the NN / FQNN / FNN flags.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl SweepTable {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        // Writing to memory cannot fail.
        w.write_record(&self.header).expect("in-memory CSV");
        for row in &self.rows {
            w.write_record(row).expect("in-memory CSV");
        }
        String::from_utf8(w.into_inner().expect("in-memory CSV")).expect("CSV cells are UTF-8")
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_csv())?;
        Ok(())
    }
}

fn bound_name(model: Model, parameter: Option<usize>) -> String {
    match parameter {
        Some(p) => format!("{}_{p}", model.name()),
        None => model.name().to_string(),
    }
}

pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate()?;
    let mut header = vec![spec.parameter.name().to_string(), "value".into(), "predicted".into()];
    let mut rows = Vec::with_capacity(spec.steps);
    for (k, p) in spec.points().into_iter().enumerate() {
        let strategy = spec.strategy_at(p).build()?;
        let w = evaluate(strategy.witness_family(), &strategy.behavior()?, strategy.n())?;
        let report = WitnessReport::new(w)?;
        let bounds: Vec<_> = report.bounds.iter().filter(|b| b.model != Model::QuantumMax).collect();
        if k == 0 {
            header.extend(bounds.iter().map(|b| bound_name(b.model, b.parameter)));
            header.extend(bounds.iter().map(|b| format!("violates_{}", bound_name(b.model, b.parameter))));
            header.extend(["nn", "fqnn", "fnn"].map(String::from));
        }
        let value = report.witness.value;
        let mut row = vec![format_f64(p), format_f64(value), strategy.predicted_value.map(format_f64).unwrap_or_default()];
        row.extend(bounds.iter().map(|b| format_f64(b.threshold)));
        row.extend(bounds.iter().map(|b| (value - b.threshold > tolerance()).to_string()));
        row.extend([ClaimKind::Nn, ClaimKind::Fqnn, ClaimKind::Fnn].map(|c| report.has_claim(c).to_string()));
        rows.push(row);
    }
    Ok(SweepTable { header, rows })
}
