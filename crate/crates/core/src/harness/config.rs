//! TOML configuration for the command line tool and sweeps.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::cauchy::QuadOptions;
use crate::cgo::{CgoOptions, DEFAULT_C0};
use crate::error::{Error, Result};
use crate::quadrature::RuleKind;
use crate::recon::{PairingSource, ReconOptions, DEFAULT_CELLS_PER_AXIS, PAIRING_SPREAD};
use crate::reflection::{DomainSpec, Potential, Term};

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub domain: DomainConfig,
    pub potentials: PotentialsConfig,
    pub schedule: ScheduleConfig,
    pub resolution: ResolutionConfig,
    pub output: OutputConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DomainConfig {
    pub dim: usize,
    pub half_width: f64,
    pub depth: f64,
}

impl Default for DomainConfig {
    fn default() -> Self {
        Self { dim: 3, half_width: 0.6, depth: 1.0 }
    }
}

/// Both potentials as lists of closed-form terms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PotentialsConfig {
    pub q1: Vec<Term>,
    pub q2: Vec<Term>,
    /// Sobolev order `s` assumed for both.
    pub s: Option<f64>,
}

impl Default for PotentialsConfig {
    fn default() -> Self {
        let background = Term::RadialBump { center: vec![0.1, 0.0, -0.45], radius: 0.35, power: 4, amplitude: 0.3 };
        let bump = Term::PolyBox { center: vec![0.0, 0.0, -0.5], half_widths: vec![0.4; 3], power: 4, amplitude: 1.0 };
        Self { q1: vec![background.clone()], q2: vec![background, bump], s: None }
    }
}

/// How `δ` enters a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeltaMode {
    /// Multiplicative trace noise of relative size `δ`.
    #[default]
    Noise,
    /// `δ` measured as the trace distance of noiseless matched pairs.
    Proxy,
}

impl DeltaMode {
    pub fn tag(self) -> &'static str {
        match self {
            DeltaMode::Noise => "noise",
            DeltaMode::Proxy => "proxy",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany {
    One(f64),
    Many(Vec<f64>),
}

impl OneOrMany {
    pub fn values(&self) -> Vec<f64> {
        match self {
            OneOrMany::One(v) => vec![*v],
            OneOrMany::Many(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScheduleConfig {
    pub k: Vec<f64>,
    pub delta: OneOrMany,
    pub delta_mode: DeltaMode,
    pub s: f64,
    /// A priori bound `M`.
    #[serde(rename = "M")]
    pub m: f64,
    #[serde(rename = "C0")]
    pub c0: f64,
    /// Constant of the reference bound curve.
    #[serde(rename = "C")]
    pub c: f64,
    /// Enclosing radius `R`; defaults to the domain's.
    #[serde(rename = "R")]
    pub r: Option<f64>,
    /// Fixed `a`, `ρ` or `τ` instead of the scheduled values.
    pub a: Option<f64>,
    pub rho: Option<f64>,
    pub tau: Option<f64>,
    pub seed: u64,
}

impl Default for ScheduleConfig {
    fn default() -> Self {
        Self {
            k: vec![1.0, 2.0, 4.0, 8.0],
            delta: OneOrMany::One(1e-6),
            delta_mode: DeltaMode::Noise,
            s: 0.25,
            m: 1.0,
            c0: DEFAULT_C0,
            c: 1.0,
            r: None,
            a: None,
            rho: None,
            tau: None,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ResolutionConfig {
    pub modes: usize,
    /// Cells per axis of `E(ρ)`.
    pub cells: usize,
    pub face_nodes: usize,
    pub volume_nodes: usize,
    pub band: usize,
    pub quadrature: RuleKind,
    pub spread: usize,
    pub tol: f64,
    pub max_iter: usize,
    pub source: PairingSource,
}

impl Default for ResolutionConfig {
    fn default() -> Self {
        let q = QuadOptions::default();
        Self {
            modes: 32,
            cells: DEFAULT_CELLS_PER_AXIS,
            face_nodes: q.face_nodes,
            volume_nodes: q.volume_nodes,
            band: q.band,
            quadrature: q.kind,
            spread: PAIRING_SPREAD,
            tol: 1e-10,
            max_iter: 200,
            source: PairingSource::Oracle,
        }
    }
}

impl ResolutionConfig {
    pub fn quad(&self) -> QuadOptions {
        QuadOptions { kind: self.quadrature, face_nodes: self.face_nodes, volume_nodes: self.volume_nodes, band: self.band }
    }

    pub fn cgo(&self) -> CgoOptions {
        CgoOptions { modes: self.modes, tol: self.tol, max_iter: self.max_iter, ..CgoOptions::default() }
    }

    pub fn recon(&self) -> ReconOptions {
        ReconOptions { cgo: self.cgo(), spread: self.spread, quad: self.quad(), source: self.source, ..ReconOptions::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub csv: String,
    pub plot: String,
    /// Also write the per-frequency estimates of every row.
    pub estimates: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { dir: PathBuf::from("bcgo-out"), csv: "sweep.csv".into(), plot: "sweep.svg".into(), estimates: false }
    }
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Config = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("configuration serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let r = &self.resolution;
        if r.modes < 4 || r.modes % 2 != 0 {
            return Err(Error::Config(format!("resolution.modes = {} must be even and at least 4", r.modes)));
        }
        if r.cells == 0 || r.face_nodes == 0 || r.volume_nodes == 0 || r.spread < 2 {
            return Err(Error::Config("resolution counts must be positive and spread at least 2".into()));
        }
        if self.schedule.k.is_empty() || self.schedule.delta.values().is_empty() {
            return Err(Error::Config("schedule needs at least one k and one δ".into()));
        }
        self.domain_spec()?;
        self.potentials()?;
        Ok(())
    }

    pub fn domain_spec(&self) -> Result<DomainSpec> {
        DomainSpec::new(self.domain.dim, self.domain.half_width, self.domain.depth)
            .map_err(|e| Error::Config(format!("domain: {e}")))
    }

    pub fn potentials(&self) -> Result<(Potential, Potential)> {
        let n = self.domain.dim;
        let build = |terms: &[Term], name: &str| {
            Potential::from_terms(n, terms.to_vec()).map_err(|e| Error::Config(format!("potentials.{name}: {e}")))
        };
        let mut q1 = build(&self.potentials.q1, "q1")?;
        let mut q2 = build(&self.potentials.q2, "q2")?;
        if let Some(s) = self.potentials.s {
            q1 = q1.with_regularity(s, self.schedule.m);
            q2 = q2.with_regularity(s, self.schedule.m);
        }
        Ok((q1, q2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_defaults() {
        let cfg = Config::default();
        let back = Config::from_toml(&cfg.to_toml()).unwrap();
        assert_eq!(cfg, back);
        let partial = Config::from_toml("[schedule]\nk = [1.0, 3.0]\ndelta = [1e-4, 1e-6]\nM = 2.0\n").unwrap();
        assert_eq!(partial.schedule.delta.values(), vec![1e-4, 1e-6]);
        assert_eq!(partial.schedule.m, 2.0);
        assert_eq!(partial.resolution.modes, 32);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(Config::from_toml("[domain]\nfoo = 1"), Err(Error::Config(_))));
        assert!(matches!(Config::from_toml("[resolution]\nmodes = 7"), Err(Error::Config(_))));
        assert!(matches!(Config::from_toml("[domain]\ndim = 3\nhalf_width = -1.0"), Err(Error::Config(_))));
    }
}
