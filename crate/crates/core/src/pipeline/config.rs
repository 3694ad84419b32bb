use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::ardl::BoundsCase;
use crate::error::{Error, Result};
use crate::linreg::InformationCriterion;
use crate::series::{DateRange, DeterministicCase, FillPolicy, Frequency, Transform};
use crate::unitroot::{BreakModel, IntegrationConfig, LagSelection, Level, TestKind};

/// One row of the series manifest: `name,path,frequency,transform`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub name: String,
    /// Resolved against the manifest's directory when relative.
    pub path: PathBuf,
    pub frequency: Frequency,
    /// Default transform of the series.
    pub transform: Transform,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Manifest {
    pub entries: BTreeMap<String, ManifestEntry>,
}

impl Manifest {
    pub fn get(&self, name: &str) -> Option<&ManifestEntry> {
        self.entries.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }
}

#[derive(Deserialize)]
struct ManifestRow {
    name: String,
    path: String,
    frequency: String,
    #[serde(default)]
    transform: Option<String>,
}

fn parse_err(file: &str, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        file: file.into(),
        line,
        message: message.into(),
    }
}

/// Reads a manifest CSV. Relative paths are resolved against `base`.
pub fn parse_manifest(text: &str, source: &str, base: &Path) -> Result<Manifest> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let csv_err = |e: csv::Error| {
        let line = e.position().map_or(0, |p| p.line() as usize);
        parse_err(source, line, e.to_string())
    };
    let headers = rdr.headers().map_err(csv_err)?.clone();
    let mut entries = BTreeMap::new();
    for record in rdr.records() {
        let record = record.map_err(csv_err)?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let row: ManifestRow = record
            .deserialize(Some(&headers))
            .map_err(|e| parse_err(source, line, e.to_string()))?;
        let frequency = match row.frequency.to_ascii_lowercase().as_str() {
            "daily" | "d" => Frequency::Daily,
            "weekly" | "w" => Frequency::Weekly,
            other => {
                return Err(parse_err(
                    source,
                    line,
                    format!("series `{}`: unknown frequency `{other}`", row.name),
                ))
            }
        };
        let transform = match row.transform.as_deref() {
            None | Some("") => Transform::Level,
            Some(t) => t.parse().map_err(|e: Error| {
                parse_err(source, line, format!("series `{}`: {e}", row.name))
            })?,
        };
        let path = PathBuf::from(&row.path);
        let path = if path.is_relative() {
            base.join(path)
        } else {
            path
        };
        let entry = ManifestEntry {
            name: row.name.clone(),
            path,
            frequency,
            transform,
        };
        if entries.insert(row.name.clone(), entry).is_some() {
            return Err(parse_err(
                source,
                line,
                format!("series `{}` listed twice", row.name),
            ));
        }
    }
    Ok(Manifest { entries })
}

pub fn load_manifest(path: &Path) -> Result<Manifest> {
    let text = std::fs::read_to_string(path)?;
    let base = path.parent().unwrap_or(Path::new("."));
    parse_manifest(&text, &path.display().to_string(), base)
}

fn default_break_model() -> BreakModel {
    BreakModel::Intercept
}

/// Dummy specification of a model after validation.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Dummies {
    None,
    AutoZa { model: BreakModel, trim: f64 },
    Explicit { dates: Vec<NaiveDate> },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelConfig {
    pub id: String,
    /// Report table the model belongs to.
    pub table: String,
    /// Column header of the model within its table.
    pub column: String,
    pub dependent: String,
    pub dynamic_regressors: Vec<String>,
    pub exogenous: Vec<String>,
    /// Per-variable overrides of the manifest transform.
    pub transforms: BTreeMap<String, Transform>,
    pub case: DeterministicCase,
    pub p_max: usize,
    pub q_max: usize,
    pub criterion: InformationCriterion,
    pub bounds_case: Option<BoundsCase>,
    pub dummies: Dummies,
    pub sample: DateRange,
}

impl ModelConfig {
    /// Dependent first, then dynamic regressors, then exogenous.
    pub fn variables(&self) -> Vec<&str> {
        std::iter::once(self.dependent.as_str())
            .chain(self.dynamic_regressors.iter().map(String::as_str))
            .chain(self.exogenous.iter().map(String::as_str))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Settings {
    pub unit_root: IntegrationConfig,
    /// Level (percent) of the cointegration decision that gates the
    /// long-run block.
    pub bounds_level: f64,
    pub fill: FillPolicy,
    pub sample: DateRange,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            unit_root: IntegrationConfig::default(),
            bounds_level: 5.0,
            fill: FillPolicy::ForwardFill,
            sample: DateRange::unbounded(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub settings: Settings,
    pub models: Vec<ModelConfig>,
}

/// Date accepted either as a quoted string or as a bare TOML date.
#[derive(Clone, Copy)]
struct ConfigDate(NaiveDate);

impl<'de> Deserialize<'de> for ConfigDate {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Either {
            Text(String),
            Toml(toml::value::Datetime),
        }
        let text = match Either::deserialize(d)? {
            Either::Text(t) => t,
            Either::Toml(dt) => match (dt.date, dt.time) {
                (Some(date), None) => date.to_string(),
                _ => {
                    return Err(serde::de::Error::custom(format!(
                        "expected a date, got `{dt}`"
                    )))
                }
            },
        };
        NaiveDate::parse_from_str(text.trim(), "%Y-%m-%d")
            .map(ConfigDate)
            .map_err(|e| serde::de::Error::custom(format!("invalid date `{text}`: {e}")))
    }
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawSettings {
    unit_root_test: Option<String>,
    unit_root_case: Option<String>,
    break_model: Option<String>,
    max_lags: Option<usize>,
    lag_selection: Option<String>,
    trim: Option<f64>,
    level: Option<f64>,
    bounds_level: Option<f64>,
    fill: Option<FillPolicy>,
    sample_start: Option<ConfigDate>,
    sample_end: Option<ConfigDate>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDummyPolicy {
    kind: String,
    model: Option<String>,
    trim: Option<f64>,
    #[serde(default)]
    dates: Vec<ConfigDate>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    id: toml::Spanned<String>,
    table: Option<String>,
    column: Option<String>,
    dependent: String,
    #[serde(default)]
    dynamic_regressors: Vec<String>,
    #[serde(default)]
    exogenous: Vec<String>,
    #[serde(default)]
    transforms: BTreeMap<String, String>,
    case: Option<String>,
    p_max: Option<usize>,
    q_max: Option<usize>,
    criterion: Option<InformationCriterion>,
    bounds_case: Option<String>,
    dummy_policy: Option<RawDummyPolicy>,
    sample_start: Option<ConfigDate>,
    sample_end: Option<ConfigDate>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    settings: RawSettings,
    #[serde(default)]
    model: Vec<RawModel>,
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

fn settings_from(raw: RawSettings, source: &str) -> Result<Settings> {
    let bad = |m: String| parse_err(source, 0, format!("[settings] {m}"));
    let mut unit_root = IntegrationConfig::default();
    if let Some(t) = raw.unit_root_test {
        unit_root.test = t.parse::<TestKind>().map_err(|e| bad(e.to_string()))?;
    }
    if let Some(c) = raw.unit_root_case {
        unit_root.case = c.parse().map_err(|e: Error| bad(e.to_string()))?;
    }
    if let Some(m) = raw.break_model {
        unit_root.break_model = m.parse().map_err(|e: Error| bad(e.to_string()))?;
    }
    unit_root.max_lags = raw.max_lags;
    if let Some(s) = raw.lag_selection {
        unit_root.lag_selection = s.parse::<LagSelection>().map_err(|e| bad(e.to_string()))?;
    }
    if let Some(t) = raw.trim {
        unit_root.trim = t;
    }
    if let Some(l) = raw.level {
        unit_root.level = Level::from_percent(l).map_err(|e| bad(e.to_string()))?;
    }
    let bounds_level = raw.bounds_level.unwrap_or(5.0);
    if !crate::ardl::BOUNDS_LEVELS.contains(&bounds_level) {
        return Err(bad(format!("bounds_level {bounds_level} is not tabulated")));
    }
    let unbounded = DateRange::unbounded();
    Ok(Settings {
        unit_root,
        bounds_level,
        fill: raw.fill.unwrap_or_default(),
        sample: DateRange::new(
            raw.sample_start.map_or(unbounded.start, |d| d.0),
            raw.sample_end.map_or(unbounded.end, |d| d.0),
        ),
    })
}

fn model_from(raw: RawModel, settings: &Settings, text: &str, source: &str) -> Result<ModelConfig> {
    let line = line_of(text, raw.id.span().start);
    let id = raw.id.into_inner();
    let bad = |m: String| parse_err(source, line, format!("model `{id}`: {m}"));
    let case = match raw.case {
        Some(c) => c.parse().map_err(|e: Error| bad(e.to_string()))?,
        None => DeterministicCase::Constant,
    };
    let bounds_case = raw
        .bounds_case
        .map(|b| b.parse::<BoundsCase>())
        .transpose()
        .map_err(|e| bad(e.to_string()))?;
    if let Some(b) = bounds_case {
        if b.deterministic_case() != case {
            return Err(bad(format!("bounds case {b} does not match case {case}")));
        }
    }
    let p_max = raw.p_max.unwrap_or(4);
    if p_max == 0 {
        return Err(bad("p_max must be at least 1".into()));
    }
    let transforms = raw
        .transforms
        .into_iter()
        .map(|(k, v)| {
            let t: Transform = v.parse().map_err(|e: Error| bad(e.to_string()))?;
            if !t.preserves_length() {
                return Err(bad(format!(
                    "transform `{t}` of `{k}` changes the series length"
                )));
            }
            Ok((k, t))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    let dummies = match raw.dummy_policy {
        None => Dummies::None,
        Some(d) => match d.kind.as_str() {
            "none" => Dummies::None,
            "auto_za" => Dummies::AutoZa {
                model: match d.model {
                    Some(m) => m.parse().map_err(|e: Error| bad(e.to_string()))?,
                    None => default_break_model(),
                },
                trim: d.trim.unwrap_or(settings.unit_root.trim),
            },
            "explicit" => {
                if d.dates.is_empty() {
                    return Err(bad("explicit dummy policy without dates".into()));
                }
                Dummies::Explicit {
                    dates: d.dates.iter().map(|d| d.0).collect(),
                }
            }
            other => return Err(bad(format!("unknown dummy policy `{other}`"))),
        },
    };
    let sample = DateRange::new(
        raw.sample_start.map_or(settings.sample.start, |d| d.0),
        raw.sample_end.map_or(settings.sample.end, |d| d.0),
    );
    if sample.start > sample.end {
        return Err(bad("sample starts after it ends".into()));
    }
    Ok(ModelConfig {
        table: raw.table.unwrap_or_else(|| "results".into()),
        column: raw.column.unwrap_or_else(|| id.clone()),
        id,
        dependent: raw.dependent,
        dynamic_regressors: raw.dynamic_regressors,
        exogenous: raw.exogenous,
        transforms,
        case,
        p_max,
        q_max: raw.q_max.unwrap_or(4),
        criterion: raw.criterion.unwrap_or(InformationCriterion::Bic),
        bounds_case,
        dummies,
        sample,
    })
}

/// Parses a TOML run configuration with a `[settings]` table and one
/// `[[model]]` table per model.
pub fn parse_config(text: &str, source: &str) -> Result<RunConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| {
        let line = e.span().map_or(0, |s| line_of(text, s.start));
        parse_err(source, line, e.message().to_string())
    })?;
    let settings = settings_from(raw.settings, source)?;
    let mut seen = BTreeSet::new();
    let mut models = Vec::with_capacity(raw.model.len());
    for m in raw.model {
        let line = line_of(text, m.id.span().start);
        if !seen.insert(m.id.get_ref().clone()) {
            return Err(parse_err(
                source,
                line,
                format!("duplicate model id `{}`", m.id.get_ref()),
            ));
        }
        models.push(model_from(m, &settings, text, source)?);
    }
    if models.is_empty() {
        return Err(parse_err(source, 0, "no [[model]] blocks"));
    }
    Ok(RunConfig { settings, models })
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text, &path.display().to_string())
}

/// Rejects model variables missing from the manifest.
pub fn validate_against(config: &RunConfig, manifest: &Manifest) -> Result<()> {
    for m in &config.models {
        for name in m.variables() {
            if !manifest.contains(name) {
                return Err(Error::UnknownVariable {
                    model: m.id.clone(),
                    name: name.into(),
                });
            }
        }
        for name in m.transforms.keys() {
            if !m.variables().contains(&name.as_str()) {
                return Err(Error::UnknownVariable {
                    model: m.id.clone(),
                    name: name.clone(),
                });
            }
        }
    }
    Ok(())
}

pub fn load_manifest_and_config(
    manifest_path: &Path,
    config_path: &Path,
) -> Result<(Manifest, RunConfig)> {
    let manifest = load_manifest(manifest_path)?;
    let config = load_config(config_path)?;
    validate_against(&config, &manifest)?;
    Ok((manifest, config))
}
