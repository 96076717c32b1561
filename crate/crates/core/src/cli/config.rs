//! Flat `key=value` configuration with dotted keys.
//!
//! ```text
//! experiment=thm1_radial_F
//! dim=3
//! times=1,10,100,1000
//! datum.family=annulus_indicator
//! datum.r1=1
//! datum.r2=2.718281828459045
//! datum.height=1
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. `times` is either
//! a comma-separated list or `geom:from:to:count`.

use std::fmt;
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::profiles::Dimension;
use crate::transforms::{DatumFamily, InitialDatum, Tabulated};

#[derive(Debug, Clone, PartialEq)]
pub enum TimesSpec {
    List(Vec<f64>),
    Geometric { from: f64, to: f64, count: usize },
}

impl TimesSpec {
    pub fn values(&self) -> Vec<f64> {
        match self {
            TimesSpec::List(v) => v.clone(),
            TimesSpec::Geometric { from, to, count } => crate::analysis::geometric_times(*from, *to, *count),
        }
    }

    pub fn parse(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("geom:") {
            let parts: Vec<&str> = rest.split(':').collect();
            if parts.len() != 3 {
                return Err("expected geom:from:to:count".into());
            }
            let from = parse_f64(parts[0])?;
            let to = parse_f64(parts[1])?;
            let count = parts[2]
                .trim()
                .parse::<usize>()
                .map_err(|e| format!("bad count {:?}: {e}", parts[2]))?;
            if !(from > 0.0 && to > from && count >= 2) {
                return Err("geometric times need 0 < from < to and count >= 2".into());
            }
            return Ok(TimesSpec::Geometric { from, to, count });
        }
        let list = parse_list(s)?;
        if list.is_empty() {
            return Err("times list is empty".into());
        }
        if list.iter().any(|t| !(*t > 0.0)) {
            return Err("times must be positive".into());
        }
        if list.windows(2).any(|w| w[1] <= w[0]) {
            return Err("times must be strictly increasing".into());
        }
        Ok(TimesSpec::List(list))
    }
}

impl fmt::Display for TimesSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TimesSpec::List(v) => f.write_str(&join(v)),
            TimesSpec::Geometric { from, to, count } => write!(f, "geom:{from}:{to}:{count}"),
        }
    }
}

/// Sampling grid. Each experiment spans its own window (`8√t` around the
/// datum for sup norms, `12√t` for kernel trajectories). `points` is the
/// node count of contraction, comparison, the figures and selfmap_dims,
/// and the nodes per `ln 2` of annulus_nesting; sup-norm checks always use
/// 4096 nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: String,
    pub dim: u32,
    pub datum: DatumFamily,
    pub times: TimesSpec,
    pub grid: GridSpec,
    pub output_dir: PathBuf,
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn dimension(&self) -> Result<Dimension> {
        Dimension::new(self.dim)
    }

    pub fn initial_datum(&self) -> Result<InitialDatum> {
        InitialDatum::new(self.datum.clone(), self.dimension()?)
    }

    /// Canonical text form; parsing it gives back the same config.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for (k, v) in self.pairs() {
            out.push_str(&k);
            out.push('=');
            out.push_str(&v);
            out.push('\n');
        }
        out
    }

    fn pairs(&self) -> Vec<(String, String)> {
        let mut p = vec![
            ("experiment".to_string(), self.experiment.clone()),
            ("dim".into(), self.dim.to_string()),
            ("seed".into(), self.seed.to_string()),
            ("output_dir".into(), self.output_dir.display().to_string()),
            ("times".into(), self.times.to_string()),
            ("grid.points".into(), self.grid.points.to_string()),
            ("datum.family".into(), self.datum.name().to_string()),
        ];
        for (k, v) in datum_params(&self.datum) {
            p.push((format!("datum.{k}"), v));
        }
        p
    }

    /// Parses a whole file. The `experiment` key is required.
    pub fn parse(text: &str) -> Result<Self> {
        let entries = parse_lines(text)?;
        let experiment = entries
            .iter()
            .find(|e| e.key == "experiment")
            .map(|e| e.value.clone())
            .ok_or_else(|| Error::config(0, "experiment", "missing required key"))?;
        let defaults = super::experiments::default_config(&experiment)
            .ok_or_else(|| unknown_experiment(&entries, &experiment))?;
        defaults.with_entries(&entries)
    }

    /// Applies `key=value` entries on top of `self`. A new `datum.family`
    /// starts from that family's default parameters.
    pub fn with_entries(&self, entries: &[Entry]) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for e in entries {
            if !seen.insert(e.key.as_str()) {
                return Err(Error::config(e.line, &e.key, "duplicate key"));
            }
        }
        let mut cfg = self.clone();
        if let Some(e) = entries.iter().find(|e| e.key == "datum.family") {
            if e.value != cfg.datum.name() {
                cfg.datum = default_family(&e.value)
                    .ok_or_else(|| Error::config(e.line, &e.key, format!("unknown datum family {:?}", e.value)))?;
            }
        }
        let mut table = TableParts::of(&cfg.datum);
        for e in entries {
            let bad = |m: String| Error::config(e.line, &e.key, m);
            match e.key.as_str() {
                "experiment" => {
                    if e.value != cfg.experiment {
                        return Err(bad(format!(
                            "config is for {:?} but {:?} was requested",
                            e.value, cfg.experiment
                        )));
                    }
                }
                "datum.family" => {}
                "dim" => {
                    cfg.dim = e.value.trim().parse().map_err(|err| bad(format!("{err}")))?;
                    Dimension::new(cfg.dim).map_err(|err| bad(err.to_string()))?;
                }
                "seed" => cfg.seed = e.value.trim().parse().map_err(|err| bad(format!("{err}")))?,
                "output_dir" => {
                    if e.value.trim().is_empty() {
                        return Err(bad("empty path".into()));
                    }
                    cfg.output_dir = PathBuf::from(e.value.trim());
                }
                "times" => cfg.times = TimesSpec::parse(&e.value).map_err(bad)?,
                "grid.points" => {
                    cfg.grid.points = e.value.trim().parse().map_err(|err| bad(format!("{err}")))?;
                    if cfg.grid.points < 2 {
                        return Err(bad("need at least 2 points".into()));
                    }
                }
                key => match key.strip_prefix("datum.") {
                    Some(param) => set_param(&mut cfg.datum, &mut table, param, &e.value).map_err(bad)?,
                    None => return Err(bad("unknown key".into())),
                },
            }
        }
        let datum_line = entries
            .iter()
            .filter(|e| e.key.starts_with("datum."))
            .map(|e| e.line)
            .next_back()
            .unwrap_or(0);
        if let Some(t) = table.build().map_err(|m| Error::config(datum_line, "datum", m))? {
            cfg.datum = DatumFamily::Tabulated(t);
        }
        InitialDatum::new(cfg.datum.clone(), cfg.dimension()?)
            .map_err(|err| Error::config(datum_line, "datum", err.to_string()))?;
        Ok(cfg)
    }
}

fn unknown_experiment(entries: &[Entry], name: &str) -> Error {
    let line = entries.iter().find(|e| e.key == "experiment").map_or(0, |e| e.line);
    Error::config(line, "experiment", format!("unknown experiment {name:?}"))
}

/// One `key=value` line; `line` is 1-based, 0 for command-line overrides.
#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub line: usize,
    pub key: String,
    pub value: String,
}

pub fn parse_lines(text: &str) -> Result<Vec<Entry>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::config(i + 1, line, "expected key=value"))?;
        let key = k.trim();
        if key.is_empty() {
            return Err(Error::config(i + 1, "", "empty key"));
        }
        out.push(Entry {
            line: i + 1,
            key: key.to_string(),
            value: v.trim().to_string(),
        });
    }
    Ok(out)
}

fn parse_f64(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|e| format!("bad number {s:?}: {e}"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{s:?} is not finite"))
    }
}

fn parse_list(s: &str) -> std::result::Result<Vec<f64>, String> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_f64).collect()
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// Family with its default parameters.
pub fn default_family(name: &str) -> Option<DatumFamily> {
    Some(match name {
        "annulus_indicator" => DatumFamily::AnnulusIndicator {
            r1: 1.0,
            r2: std::f64::consts::E,
            height: 1.0,
        },
        "gaussian_bump_in_y" => DatumFamily::GaussianBumpInY {
            center: 0.0,
            width: 0.5,
            height: 1.0,
        },
        "step_to_K" => DatumFamily::StepToK {
            k: 1.0,
            transition_radius: std::f64::consts::E,
            sharpness: 4.0,
        },
        "smooth_erfc_like" => DatumFamily::SmoothErfcLike { k: 1.0, shift: 0.0 },
        "tabulated" => DatumFamily::Tabulated(
            Tabulated::new(vec![0.5, 1.0, 2.0, 4.0], vec![0.0, 1.0, 0.5, 0.0], 0.0, 0.0).ok()?,
        ),
        _ => return None,
    })
}

fn datum_params(d: &DatumFamily) -> Vec<(&'static str, String)> {
    match d {
        DatumFamily::AnnulusIndicator { r1, r2, height } => {
            vec![("r1", r1.to_string()), ("r2", r2.to_string()), ("height", height.to_string())]
        }
        DatumFamily::GaussianBumpInY { center, width, height } => vec![
            ("center", center.to_string()),
            ("width", width.to_string()),
            ("height", height.to_string()),
        ],
        DatumFamily::StepToK {
            k,
            transition_radius,
            sharpness,
        } => vec![
            ("k", k.to_string()),
            ("transition_radius", transition_radius.to_string()),
            ("sharpness", sharpness.to_string()),
        ],
        DatumFamily::SmoothErfcLike { k, shift } => vec![("k", k.to_string()), ("shift", shift.to_string())],
        DatumFamily::Tabulated(t) => {
            let (l, r) = t.tails();
            vec![
                ("radii", join(t.radii())),
                ("values", join(t.values())),
                ("tail_left", l.to_string()),
                ("tail_right", r.to_string()),
            ]
        }
    }
}

/// Pieces of a tabulated datum, rebuilt once all keys are read.
struct TableParts {
    parts: Option<(Vec<f64>, Vec<f64>, f64, f64)>,
    touched: bool,
}

impl TableParts {
    fn of(d: &DatumFamily) -> Self {
        let parts = match d {
            DatumFamily::Tabulated(t) => Some((t.radii().to_vec(), t.values().to_vec(), t.tails().0, t.tails().1)),
            _ => None,
        };
        TableParts { parts, touched: false }
    }

    fn build(self) -> std::result::Result<Option<Tabulated>, String> {
        match (self.touched, self.parts) {
            (true, Some((r, v, l, t))) => Tabulated::new(r, v, l, t).map(Some).map_err(|e| e.to_string()),
            _ => Ok(None),
        }
    }
}

fn set_param(
    d: &mut DatumFamily,
    table: &mut TableParts,
    param: &str,
    value: &str,
) -> std::result::Result<(), String> {
    let family = d.name();
    let unknown = || format!("{family} has no parameter {param:?}");
    if let Some((radii, values, tail_left, tail_right)) = table.parts.as_mut() {
        match param {
            "radii" => *radii = parse_list(value)?,
            "values" => *values = parse_list(value)?,
            "tail_left" => *tail_left = parse_f64(value)?,
            "tail_right" => *tail_right = parse_f64(value)?,
            _ => return Err(unknown()),
        }
        table.touched = true;
        return Ok(());
    }
    let slot = match (d, param) {
        (DatumFamily::AnnulusIndicator { r1, .. }, "r1") => r1,
        (DatumFamily::AnnulusIndicator { r2, .. }, "r2") => r2,
        (DatumFamily::AnnulusIndicator { height, .. }, "height") => height,
        (DatumFamily::GaussianBumpInY { center, .. }, "center") => center,
        (DatumFamily::GaussianBumpInY { width, .. }, "width") => width,
        (DatumFamily::GaussianBumpInY { height, .. }, "height") => height,
        (DatumFamily::StepToK { k, .. }, "k") => k,
        (DatumFamily::StepToK { transition_radius, .. }, "transition_radius") => transition_radius,
        (DatumFamily::StepToK { sharpness, .. }, "sharpness") => sharpness,
        (DatumFamily::SmoothErfcLike { k, .. }, "k") => k,
        (DatumFamily::SmoothErfcLike { shift, .. }, "shift") => shift,
        _ => return Err(unknown()),
    };
    *slot = parse_f64(value)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ExperimentConfig> {
        ExperimentConfig::parse(text)
    }

    #[test]
    fn round_trip_is_idempotent() {
        let text = "experiment=thm1_radial_F\ndim=4\ntimes=geom:1:1000:4\ndatum.family=tabulated\ndatum.radii=1,2,3\ndatum.values=0,1,0\n";
        let once = parse(text).unwrap().serialize();
        let twice = parse(&once).unwrap().serialize();
        assert_eq!(once, twice);
        assert!(once.contains("datum.radii=1,2,3"));
    }

    #[test]
    fn overrides_apply_on_defaults() {
        let c = parse("experiment=thm1_radial_F\ndim=4\ndatum.r2=3\n").unwrap();
        assert_eq!(c.dim, 4);
        assert!(matches!(c.datum, DatumFamily::AnnulusIndicator { r2, .. } if r2 == 3.0));
    }

    #[test]
    fn diagnostics_name_line_and_field() {
        let cases = [
            ("experiment=thm1_radial_F\n\nbogus=1\n", 3, "bogus"),
            ("experiment=thm1_radial_F\ntimes=\n", 2, "times"),
            ("experiment=thm1_radial_F\ndatum.width=1\n", 2, "datum.width"),
            ("experiment=thm1_radial_F\ndim=x\n", 2, "dim"),
            ("experiment=thm1_radial_F\ndim=3\ndim=4\n", 3, "dim"),
            ("experiment=nope\n", 1, "experiment"),
            ("experiment=thm1_radial_F\nno equals sign\n", 2, "no equals sign"),
        ];
        for (text, line, field) in cases {
            match parse(text) {
                Err(Error::Config { line: l, field: f, .. }) => assert_eq!((l, f.as_str()), (line, field), "{text}"),
                other => panic!("{text:?} gave {other:?}"),
            }
        }
        assert!(matches!(parse("dim=3\n"), Err(Error::Config { .. })));
        assert!(matches!(
            parse("experiment=thm1_radial_F\ndatum.r1=3\n"),
            Err(Error::Config { field, .. }) if field == "datum"
        ));
    }

    #[test]
    fn times_specs() {
        assert_eq!(TimesSpec::parse("0.5,1,2").unwrap().values(), vec![0.5, 1.0, 2.0]);
        let g = TimesSpec::parse("geom:10:10000:4").unwrap();
        assert_eq!(g.values().len(), 4);
        assert_eq!(g.to_string(), "geom:10:10000:4");
        assert!(TimesSpec::parse("").is_err());
        assert!(TimesSpec::parse("2,1").is_err());
        assert!(TimesSpec::parse("geom:1:1").is_err());
    }

    #[test]
    fn family_switch_uses_family_defaults() {
        let c = parse("experiment=thm1_radial_F\ndatum.family=smooth_erfc_like\ndatum.shift=0.5\n").unwrap();
        assert_eq!(c.datum, DatumFamily::SmoothErfcLike { k: 1.0, shift: 0.5 });
    }
}
