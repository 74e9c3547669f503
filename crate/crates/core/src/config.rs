//! TOML run configuration, figure presets and resolution of defaults.
//!
//! A document has the sections `material`, `pulse`, `scenario`, `grid`, `solver`,
//! `geometry`, `sweep` and `output`, plus an optional top-level `preset` naming a
//! figure configuration that the other sections override. Human units (nm, fs, µm)
//! are kept in [`RunConfig`]; SI values come out of its accessor methods.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dispersion::{DrudeLorentzMaterial, Medium};
use crate::error::{Error, Result};
use crate::mode_solver::SolverSettings;
use crate::modulation::{PulseShape, PumpPulse, Scenario};
use crate::spectrum::{EmissionGeometry, GridRange, GridSpec, Spacing};
use crate::units::{fs_to_s, nm_to_m, um_to_m};

/// Figure presets accepted by `preset = "…"` and `--preset`.
pub const FIGURE_PRESETS: [&str; 3] = ["fig2", "fig4", "fig5"];
/// Material presets accepted by `material.preset`.
pub const MATERIAL_PRESETS: [&str; 1] = ["ito-luk2015"];

const FIG2: &str = r#"
[material]
n0 = 1.0
[pulse]
tau_fs = 5.0
delta_r = 1e-3
[scenario]
kind = "nondispersive"
[sweep]
taus_fs = [2.0, 5.0, 20.0]
"#;

const FIG4: &str = r#"
[material]
preset = "ito-luk2015"
[pulse]
tau_fs = 5.0
delta_r = 1.0
[scenario]
kind = "enz_real_only"
[sweep]
taus_fs = [2.0, 5.0, 20.0]
"#;

const FIG5: &str = r#"
[material]
preset = "ito-luk2015"
[pulse]
tau_fs = 5.0
delta_r = 1.0
delta_i_scale = 1.0
[scenario]
kind = "enz_full"
[sweep]
taus_fs = [2.0, 5.0, 20.0]
"#;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    material: Option<RawMaterial>,
    #[serde(default)]
    pulse: RawPulse,
    #[serde(default)]
    scenario: RawScenario,
    #[serde(default)]
    grid: RawGrid,
    #[serde(default)]
    solver: RawSolver,
    #[serde(default)]
    geometry: RawGeometry,
    #[serde(default)]
    sweep: RawSweep,
    #[serde(default)]
    output: RawOutput,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMaterial {
    #[serde(skip_serializing_if = "Option::is_none")]
    preset: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    eps_inf: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    omega_p_sq: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n0: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPulse {
    #[serde(skip_serializing_if = "Option::is_none")]
    shape: Option<PulseShape>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tau_fs: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    delta_r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    delta_i_scale: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    #[serde(skip_serializing_if = "Option::is_none")]
    kind: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda_min_nm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda_max_nm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    k_scaled_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    k_scaled_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n_points: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    spacing: Option<Spacing>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSolver {
    #[serde(skip_serializing_if = "Option::is_none")]
    rtol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    atol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    window_factor: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_steps: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGeometry {
    #[serde(skip_serializing_if = "Option::is_none")]
    l_um: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    damping_factor: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    #[serde(skip_serializing_if = "Option::is_none")]
    taus_fs: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    #[serde(skip_serializing_if = "Option::is_none")]
    path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    format: Option<OutputFormat>,
}

macro_rules! overlay {
    ($base:expr, $top:expr; $($field:ident),+) => {
        $( if $top.$field.is_some() { $base.$field = $top.$field.clone(); } )+
    };
}

impl RawConfig {
    /// Fields set in `top` win; a `material` section in `top` replaces the base one whole.
    fn overlay(mut self, top: &RawConfig) -> RawConfig {
        if top.material.is_some() {
            self.material = top.material.clone();
        }
        overlay!(self.pulse, top.pulse; shape, tau_fs, delta_r, delta_i_scale);
        overlay!(self.scenario, top.scenario; kind);
        let g = &top.grid;
        if g.lambda_min_nm.is_some() || g.lambda_max_nm.is_some() {
            self.grid.k_scaled_min = None;
            self.grid.k_scaled_max = None;
        }
        if g.k_scaled_min.is_some() || g.k_scaled_max.is_some() {
            self.grid.lambda_min_nm = None;
            self.grid.lambda_max_nm = None;
        }
        overlay!(self.grid, top.grid; lambda_min_nm, lambda_max_nm, k_scaled_min, k_scaled_max, n_points, spacing);
        overlay!(self.solver, top.solver; rtol, atol, window_factor, max_steps);
        overlay!(self.geometry, top.geometry; l_um, damping_factor);
        overlay!(self.sweep, top.sweep; taus_fs);
        overlay!(self.output, top.output; path, format);
        self.preset = top.preset.clone();
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::validation("output.format", "one of csv, json")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MaterialConfig {
    Preset(String),
    DrudeLorentz(DrudeLorentzMaterial),
    Constant { n0: f64 },
}

impl MaterialConfig {
    pub fn medium(&self) -> Result<Medium> {
        match self {
            MaterialConfig::Preset(name) => material_preset(name).map(Medium::DrudeLorentz),
            MaterialConfig::DrudeLorentz(m) => Ok(Medium::DrudeLorentz(*m)),
            MaterialConfig::Constant { n0 } => Ok(Medium::Constant { n0: *n0 }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseConfig {
    pub shape: PulseShape,
    pub tau_fs: f64,
    pub delta_r: f64,
    pub delta_i_scale: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridBounds {
    Nanometres { min: f64, max: f64 },
    ScaledK { min: f64, max: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridConfig {
    pub bounds: GridBounds,
    pub n_points: usize,
    pub spacing: Spacing,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryConfig {
    pub l_um: f64,
    pub damping_factor: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct OutputConfig {
    pub path: Option<String>,
    pub format: OutputFormat,
}

/// Fully resolved and validated run description.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub material: MaterialConfig,
    pub pulse: PulseConfig,
    pub scenario: Scenario,
    pub grid: GridConfig,
    pub solver: SolverSettings,
    pub geometry: GeometryConfig,
    pub taus_fs: Vec<f64>,
    pub output: OutputConfig,
}

pub fn material_preset(name: &str) -> Result<DrudeLorentzMaterial> {
    match name {
        "ito-luk2015" => Ok(DrudeLorentzMaterial::ITO_LUK2015),
        _ => Err(Error::validation(
            "material.preset",
            format!("one of {}", MATERIAL_PRESETS.join(", ")),
        )),
    }
}

fn preset_document(name: &str) -> Result<&'static str> {
    match name {
        "fig2" => Ok(FIG2),
        "fig4" => Ok(FIG4),
        "fig5" => Ok(FIG5),
        _ => Err(Error::validation(
            "preset",
            format!("one of {}", FIGURE_PRESETS.join(", ")),
        )),
    }
}

fn parse_raw(text: &str) -> Result<RawConfig> {
    toml::from_str(text).map_err(|e| {
        let (line, column) = e
            .span()
            .map(|s| line_column(text, s.start))
            .unwrap_or((0, 0));
        Error::Parse {
            line,
            column,
            message: e.message().to_string(),
        }
    })
}

/// 1-based line and column of byte offset `pos`.
fn line_column(text: &str, pos: usize) -> (usize, usize) {
    let before = &text[..pos.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    parse_config_with_defaults(text).map(|(config, _)| config)
}

/// As [`parse_config`], also listing every key filled from a default.
pub fn parse_config_with_defaults(text: &str) -> Result<(RunConfig, Vec<String>)> {
    let mut raw = parse_raw(text)?;
    if let Some(name) = raw.preset.clone() {
        raw = parse_raw(preset_document(&name)?)?.overlay(&raw);
    }
    resolve(raw)
}

/// Configuration for a figure preset.
pub fn preset(name: &str) -> Result<RunConfig> {
    parse_config(&format!("preset = \"{name}\"\n"))
}

fn pick<T>(defaults: &mut Vec<String>, value: Option<T>, key: &str, fallback: T) -> T {
    value.unwrap_or_else(|| {
        defaults.push(key.to_string());
        fallback
    })
}

fn resolve(raw: RawConfig) -> Result<(RunConfig, Vec<String>)> {
    let mut defaults = Vec::new();

    let scenario: Scenario = raw
        .scenario
        .kind
        .as_deref()
        .ok_or_else(|| Error::validation("scenario.kind", "required"))?
        .parse()?;
    let enz = scenario != Scenario::Nondispersive;

    let material = match raw.material.unwrap_or_default() {
        RawMaterial {
            n0: Some(n0),
            preset: None,
            eps_inf: None,
            omega_p_sq: None,
            gamma: None,
        } => MaterialConfig::Constant { n0 },
        RawMaterial { n0: Some(_), .. } => {
            return Err(Error::validation(
                "material.n0",
                "cannot be combined with a Drude-Lorentz material",
            ))
        }
        RawMaterial {
            preset: Some(name),
            eps_inf: None,
            omega_p_sq: None,
            gamma: None,
            ..
        } => {
            material_preset(&name)?;
            MaterialConfig::Preset(name)
        }
        RawMaterial {
            preset: Some(_), ..
        } => {
            return Err(Error::validation(
                "material.preset",
                "cannot be combined with explicit eps_inf, omega_p_sq, gamma",
            ))
        }
        RawMaterial {
            eps_inf: None,
            omega_p_sq: None,
            gamma: None,
            ..
        } => {
            defaults.push("material".to_string());
            if enz {
                MaterialConfig::Preset(MATERIAL_PRESETS[0].to_string())
            } else {
                MaterialConfig::Constant { n0: 1.0 }
            }
        }
        RawMaterial {
            eps_inf,
            omega_p_sq,
            gamma,
            ..
        } => {
            let need = |v: Option<f64>, key: &str| {
                v.ok_or_else(|| {
                    Error::validation(key, "required with an explicit Drude-Lorentz material")
                })
            };
            MaterialConfig::DrudeLorentz(
                DrudeLorentzMaterial::new(
                    need(eps_inf, "material.eps_inf")?,
                    need(omega_p_sq, "material.omega_p_sq")?,
                    need(gamma, "material.gamma")?,
                )
                .map_err(|e| Error::validation("material", e.to_string()))?,
            )
        }
    };

    let pulse = PulseConfig {
        shape: raw.pulse.shape.unwrap_or_default(),
        tau_fs: pick(&mut defaults, raw.pulse.tau_fs, "pulse.tau_fs", 5.0),
        delta_r: pick(
            &mut defaults,
            raw.pulse.delta_r,
            "pulse.delta_r",
            if enz { 1.0 } else { 1e-3 },
        ),
        delta_i_scale: pick(
            &mut defaults,
            raw.pulse.delta_i_scale,
            "pulse.delta_i_scale",
            1.0,
        ),
    };

    let g = &raw.grid;
    let nm = g.lambda_min_nm.is_some() || g.lambda_max_nm.is_some();
    let scaled = g.k_scaled_min.is_some() || g.k_scaled_max.is_some();
    if nm && scaled {
        return Err(Error::validation(
            "grid",
            "give either lambda_min_nm/lambda_max_nm or k_scaled_min/k_scaled_max",
        ));
    }
    let bounds = if scaled || (!nm && !enz) {
        GridBounds::ScaledK {
            min: pick(&mut defaults, g.k_scaled_min, "grid.k_scaled_min", 0.1),
            max: pick(&mut defaults, g.k_scaled_max, "grid.k_scaled_max", 20.0),
        }
    } else {
        GridBounds::Nanometres {
            min: pick(&mut defaults, g.lambda_min_nm, "grid.lambda_min_nm", 800.0),
            max: pick(&mut defaults, g.lambda_max_nm, "grid.lambda_max_nm", 2400.0),
        }
    };
    let d = SolverSettings::default();
    let solver = SolverSettings {
        rtol: pick(&mut defaults, raw.solver.rtol, "solver.rtol", d.rtol),
        atol: pick(&mut defaults, raw.solver.atol, "solver.atol", d.atol),
        window_factor: pick(
            &mut defaults,
            raw.solver.window_factor,
            "solver.window_factor",
            d.window_factor,
        ),
        max_steps: pick(
            &mut defaults,
            raw.solver.max_steps,
            "solver.max_steps",
            d.max_steps,
        ),
    };
    let dg = EmissionGeometry::default();
    let geometry = GeometryConfig {
        l_um: pick(
            &mut defaults,
            raw.geometry.l_um,
            "geometry.l_um",
            dg.transverse_extent * 1e6,
        ),
        damping_factor: pick(
            &mut defaults,
            raw.geometry.damping_factor,
            "geometry.damping_factor",
            dg.damping_factor,
        ),
    };
    let n_points = pick(&mut defaults, raw.grid.n_points, "grid.n_points", 200);
    let natural_spacing = match bounds {
        GridBounds::Nanometres { .. } => Spacing::LinearLambda,
        GridBounds::ScaledK { .. } => Spacing::LinearK,
    };
    let spacing = pick(
        &mut defaults,
        raw.grid.spacing,
        "grid.spacing",
        natural_spacing,
    );
    let taus_fs = pick(
        &mut defaults,
        raw.sweep.taus_fs,
        "sweep.taus_fs",
        vec![pulse.tau_fs],
    );
    let output = OutputConfig {
        path: raw.output.path,
        format: raw.output.format.unwrap_or_default(),
    };

    let config = RunConfig {
        material,
        pulse,
        scenario,
        grid: GridConfig {
            bounds,
            n_points,
            spacing,
        },
        solver,
        geometry,
        taus_fs,
        output,
    };
    config.validate()?;
    Ok((config, defaults))
}

impl RunConfig {
    /// Checks every physical value before any computation starts.
    pub fn validate(&self) -> Result<()> {
        let p = &self.pulse;
        if !(p.tau_fs > 0.0 && p.tau_fs.is_finite()) {
            return Err(Error::validation("pulse.tau_fs", "tau_fs > 0"));
        }
        if !(p.delta_r >= 0.0 && p.delta_r.is_finite()) {
            return Err(Error::validation("pulse.delta_r", "delta_r >= 0"));
        }
        if !p.delta_i_scale.is_finite() {
            return Err(Error::validation("pulse.delta_i_scale", "finite"));
        }
        let medium = self.medium()?;
        if let Medium::Constant { n0 } = medium {
            if !(n0 > 0.0 && n0.is_finite()) {
                return Err(Error::validation("material.n0", "n0 > 0"));
            }
        }
        if self.scenario == Scenario::Nondispersive && !matches!(medium, Medium::Constant { .. }) {
            return Err(Error::validation(
                "scenario.kind",
                "nondispersive requires a constant-index material (material.n0)",
            ));
        }
        let (min, max, key) = match self.grid.bounds {
            GridBounds::Nanometres { min, max } => (min, max, "grid.lambda_min_nm"),
            GridBounds::ScaledK { min, max } => (min, max, "grid.k_scaled_min"),
        };
        if !(min > 0.0 && min < max && max.is_finite()) {
            return Err(Error::validation(key, "0 < min < max"));
        }
        if self.grid.n_points < 2 {
            return Err(Error::validation("grid.n_points", "n_points >= 2"));
        }
        self.solver.validate()?;
        if !(self.geometry.l_um > 0.0 && self.geometry.l_um.is_finite()) {
            return Err(Error::validation("geometry.l_um", "l_um > 0"));
        }
        self.geometry()?.validate()?;
        if self.taus_fs.is_empty() {
            return Err(Error::validation("sweep.taus_fs", "at least one rise time"));
        }
        if let Some(bad) = self.taus_fs.iter().find(|t| !(**t > 0.0 && t.is_finite())) {
            return Err(Error::validation(
                "sweep.taus_fs",
                format!("every tau > 0, got {bad}"),
            ));
        }
        Ok(())
    }

    pub fn medium(&self) -> Result<Medium> {
        self.material.medium()
    }

    /// Pump pulse in SI units at the configured `pulse.tau_fs`.
    pub fn pulse(&self) -> PumpPulse {
        PumpPulse {
            shape: self.pulse.shape,
            tau: fs_to_s(self.pulse.tau_fs),
            delta_r: self.pulse.delta_r,
            delta_i_scale: self.pulse.delta_i_scale,
        }
    }

    pub fn grid_spec(&self) -> GridSpec {
        let range = match self.grid.bounds {
            GridBounds::Nanometres { min, max } => GridRange::Wavelength {
                min: nm_to_m(min),
                max: nm_to_m(max),
            },
            GridBounds::ScaledK { min, max } => GridRange::ScaledK { min, max },
        };
        GridSpec {
            range,
            n_points: self.grid.n_points,
            spacing: self.grid.spacing,
        }
    }

    pub fn geometry(&self) -> Result<EmissionGeometry> {
        let g = EmissionGeometry {
            transverse_extent: um_to_m(self.geometry.l_um),
            damping_factor: self.geometry.damping_factor,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn taus(&self) -> Vec<f64> {
        self.taus_fs.iter().map(|&t| fs_to_s(t)).collect()
    }

    /// Fully explicit document; `parse_config(&c.to_toml())` returns `c`.
    pub fn to_toml(&self) -> String {
        let material = match &self.material {
            MaterialConfig::Preset(name) => RawMaterial {
                preset: Some(name.clone()),
                ..RawMaterial::default()
            },
            MaterialConfig::DrudeLorentz(m) => RawMaterial {
                eps_inf: Some(m.eps_inf),
                omega_p_sq: Some(m.omega_p_sq),
                gamma: Some(m.gamma),
                ..RawMaterial::default()
            },
            MaterialConfig::Constant { n0 } => RawMaterial {
                n0: Some(*n0),
                ..RawMaterial::default()
            },
        };
        let mut grid = RawGrid {
            n_points: Some(self.grid.n_points),
            spacing: Some(self.grid.spacing),
            ..RawGrid::default()
        };
        match self.grid.bounds {
            GridBounds::Nanometres { min, max } => {
                grid.lambda_min_nm = Some(min);
                grid.lambda_max_nm = Some(max);
            }
            GridBounds::ScaledK { min, max } => {
                grid.k_scaled_min = Some(min);
                grid.k_scaled_max = Some(max);
            }
        }
        let raw = RawConfig {
            preset: None,
            material: Some(material),
            pulse: RawPulse {
                shape: Some(self.pulse.shape),
                tau_fs: Some(self.pulse.tau_fs),
                delta_r: Some(self.pulse.delta_r),
                delta_i_scale: Some(self.pulse.delta_i_scale),
            },
            scenario: RawScenario {
                kind: Some(self.scenario.as_str().to_string()),
            },
            grid,
            solver: RawSolver {
                rtol: Some(self.solver.rtol),
                atol: Some(self.solver.atol),
                window_factor: Some(self.solver.window_factor),
                max_steps: Some(self.solver.max_steps),
            },
            geometry: RawGeometry {
                l_um: Some(self.geometry.l_um),
                damping_factor: Some(self.geometry.damping_factor),
            },
            sweep: RawSweep {
                taus_fs: Some(self.taus_fs.clone()),
            },
            output: RawOutput {
                path: self.output.path.clone(),
                format: Some(self.output.format),
            },
        };
        toml::to_string(&raw).expect("configuration is always representable in TOML")
    }

    /// SHA-256 of the explicit document with the output section blanked, so runs of
    /// the same physics share a hash wherever they are written.
    pub fn hash(&self) -> String {
        let physics = RunConfig {
            output: OutputConfig::default(),
            ..self.clone()
        };
        hex::encode(Sha256::digest(physics.to_toml().as_bytes()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn fig2_preset() {
        let c = preset("fig2").unwrap();
        assert_eq!(c.scenario, Scenario::Nondispersive);
        assert_eq!(c.material, MaterialConfig::Constant { n0: 1.0 });
        assert_eq!(c.pulse.delta_r, 1e-3);
        assert_eq!(c.taus_fs, vec![2.0, 5.0, 20.0]);
        assert_eq!(
            c.grid.bounds,
            GridBounds::ScaledK {
                min: 0.1,
                max: 20.0
            }
        );
        assert_eq!(c.grid.n_points, 200);
    }

    #[test]
    fn enz_presets() {
        let c4 = preset("fig4").unwrap();
        assert_eq!(c4.scenario, Scenario::EnzRealOnly);
        assert_eq!(
            c4.medium().unwrap(),
            Medium::DrudeLorentz(DrudeLorentzMaterial::ITO_LUK2015)
        );
        assert_eq!(
            c4.grid.bounds,
            GridBounds::Nanometres {
                min: 800.0,
                max: 2400.0
            }
        );
        assert_eq!(c4.grid.spacing, Spacing::LinearLambda);
        assert_eq!(preset("fig5").unwrap().scenario, Scenario::EnzFull);
        assert!(preset("fig3").is_err());
    }

    #[test]
    fn empty_document_needs_scenario() {
        match parse_config("") {
            Err(Error::Validation { key, .. }) => assert_eq!(key, "scenario.kind"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn negative_tau_rejected() {
        let doc = "[scenario]\nkind = \"enz_full\"\n[pulse]\ntau_fs = -5\n";
        match parse_config(doc) {
            Err(Error::Validation { key, constraint }) => {
                assert_eq!(key, "pulse.tau_fs");
                assert!(constraint.contains("> 0"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_keys_and_positions() {
        let doc = "[scenario]\nkind = \"enz_full\"\n[pulse]\ntua_fs = 5\n";
        match parse_config(doc) {
            Err(Error::Parse { line, message, .. }) => {
                assert_eq!(line, 4);
                assert!(message.contains("tua_fs"), "{message}");
            }
            other => panic!("{other:?}"),
        }
        match parse_config("[scenario]\nkind = = 1\n") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column > 1), (2, true)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bad_scenario_name() {
        assert!(matches!(
            parse_config("[scenario]\nkind = \"dispersive\"\n"),
            Err(Error::Validation { .. })
        ));
        assert!(parse_config(
            "[scenario]\nkind = \"nondispersive\"\n[material]\npreset = \"ito-luk2015\"\n"
        )
        .is_err());
    }

    #[test]
    fn defaults_are_reported() {
        let (c, defaults) =
            parse_config_with_defaults("[scenario]\nkind = \"enz_real_only\"\n").unwrap();
        assert_eq!(c.pulse.delta_r, 1.0);
        for key in [
            "material",
            "pulse.tau_fs",
            "pulse.delta_r",
            "grid.n_points",
            "geometry.damping_factor",
            "sweep.taus_fs",
        ] {
            assert!(
                defaults.iter().any(|d| d == key),
                "{key} missing from {defaults:?}"
            );
        }
        let (_, none) = parse_config_with_defaults(&c.to_toml()).unwrap();
        assert!(none.is_empty(), "{none:?}");
    }

    #[test]
    fn preset_overrides() {
        let c = parse_config("preset = \"fig4\"\n[pulse]\ntau_fs = 7.5\n[grid]\nn_points = 11\n")
            .unwrap();
        assert_eq!(c.pulse.tau_fs, 7.5);
        assert_eq!(c.pulse.delta_r, 1.0);
        assert_eq!(c.grid.n_points, 11);
        let c = parse_config("preset = \"fig4\"\n[grid]\nk_scaled_min = 1\nk_scaled_max = 2\n")
            .unwrap();
        assert_eq!(c.grid.bounds, GridBounds::ScaledK { min: 1.0, max: 2.0 });
    }

    #[test]
    fn explicit_material_and_conflicts() {
        let doc = "[scenario]\nkind = \"enz_full\"\n[material]\neps_inf = 4.0\nomega_p_sq = 7e30\ngamma = 1e14\n";
        let c = parse_config(doc).unwrap();
        assert!(matches!(c.material, MaterialConfig::DrudeLorentz(_)));
        assert!(
            parse_config("[scenario]\nkind = \"enz_full\"\n[material]\neps_inf = 4.0\n").is_err()
        );
        assert!(parse_config(
            "[scenario]\nkind = \"enz_full\"\n[material]\nn0 = 1.5\ngamma = 1.0\n"
        )
        .is_err());
    }

    #[test]
    fn presets_round_trip_and_hash() {
        for name in FIGURE_PRESETS {
            let c = preset(name).unwrap();
            let again = parse_config(&c.to_toml()).unwrap();
            assert_eq!(again, c);
            assert_eq!(again.hash(), c.hash());
            assert_eq!(c.hash().len(), 64);
        }
        assert_ne!(
            preset("fig4").unwrap().hash(),
            preset("fig5").unwrap().hash()
        );
        let mut c = preset("fig4").unwrap();
        let h = c.hash();
        c.output.path = Some("elsewhere.csv".into());
        assert_eq!(c.hash(), h);
    }

    #[test]
    fn si_conversion() {
        let c = preset("fig4").unwrap();
        assert_eq!(c.pulse().tau, 5e-15);
        assert_eq!(c.taus(), vec![2e-15, 5e-15, 20e-15]);
        match c.grid_spec().range {
            GridRange::Wavelength { min, max } => assert_eq!((min, max), (800e-9, 2400e-9)),
            r => panic!("{r:?}"),
        }
    }

    proptest! {
        #[test]
        fn round_trip(tau in 0.1f64..100.0, d in 0.0f64..2.0, n in 2usize..500, l in 0.01f64..10.0) {
            let doc = format!(
                "[scenario]\nkind = \"enz_full\"\n[pulse]\ntau_fs = {tau:?}\ndelta_r = {d:?}\n\
                 [grid]\nn_points = {n}\n[geometry]\nl_um = {l:?}\n"
            );
            let c = parse_config(&doc).unwrap();
            prop_assert_eq!(parse_config(&c.to_toml()).unwrap(), c);
        }
    }
}
