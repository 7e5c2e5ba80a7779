//! One row of observables per scenario, shared by `eval` and `sweep`.

use serde_json::{Map, Value};
use wva_core::analytic::{
    detect_probability_recycled, detected_power, discard_probability_recycled, fail_probability,
    pointer_shift_discarded, pointer_shift_orthogonal, pointer_shift_recycled,
    pointer_shift_standard, postselection_probability, qfi_recycled, qfi_standard, recycled_meter,
    walk_off_ratio, QfiForm, RecycleVariant,
};
use wva_core::readout::{
    default_fd_step, fisher_factor_recycled, fisher_factor_standard, gamma_recycled, gamma_standard,
};
use wva_core::{ExperimentConfig, RawConfig};

/// Column order of config fields in every record.
pub const CONFIG_COLUMNS: [&str; 7] = crate::settings::FIELDS;

/// Column order of observables in every record.
pub const OBSERVABLE_COLUMNS: [&str; 17] = [
    "postselection_probability",
    "fail_probability",
    "detected_power",
    "qfi_standard",
    "qfi_recycled",
    "pointer_shift_standard",
    "pointer_shift_orthogonal",
    "pointer_shift_recycled",
    "pointer_shift_discarded",
    "walk_off_ratio",
    "gamma_standard",
    "gamma_recycled",
    "fisher_factor_standard",
    "fisher_factor_recycled",
    "detect_probability_recycled",
    "discard_probability_recycled",
    "recycled_meter_norm",
];

/// Closed-form choices that change observable values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Variants {
    /// Form used for `qfi_standard`.
    pub qfi_form: QfiForm,
    /// Form used for `recycled_meter_norm`.
    pub recycle: RecycleVariant,
}

impl Default for Variants {
    fn default() -> Self {
        Self {
            qfi_form: QfiForm::Derived,
            recycle: RecycleVariant::Exact,
        }
    }
}

/// `Err` carries the reason a guarded quantity is undefined.
pub type Cell = std::result::Result<f64, String>;

#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub config: RawConfig,
    /// Same order as [`OBSERVABLE_COLUMNS`].
    pub values: Vec<Cell>,
}

fn cell(v: wva_core::Result<f64>) -> Cell {
    match v {
        Ok(x) if x.is_finite() => Ok(x),
        Ok(_) => Err("non-finite".to_string()),
        Err(e) => Err(e.reason()),
    }
}

pub fn evaluate(cfg: &ExperimentConfig, variants: Variants) -> Record {
    let step = default_fd_step(cfg.g());
    let values = vec![
        cell(Ok(postselection_probability(cfg))),
        cell(Ok(fail_probability(cfg))),
        cell(detected_power(cfg)),
        cell(Ok(qfi_standard(cfg, variants.qfi_form))),
        cell(qfi_recycled(cfg)),
        cell(pointer_shift_standard(cfg)),
        cell(pointer_shift_orthogonal(cfg)),
        cell(pointer_shift_recycled(cfg)),
        cell(pointer_shift_discarded(cfg)),
        cell(walk_off_ratio(cfg)),
        cell(gamma_standard(cfg)),
        cell(gamma_recycled(cfg)),
        cell(fisher_factor_standard(cfg)),
        cell(fisher_factor_recycled(cfg, step)),
        cell(detect_probability_recycled(cfg)),
        cell(discard_probability_recycled(cfg)),
        cell(recycled_meter(cfg, variants.recycle).map(|m| m.norm_sqr())),
    ];
    Record {
        config: cfg.raw(),
        values,
    }
}

/// Config fields in [`CONFIG_COLUMNS`] order, formatted.
pub fn config_cells(raw: &RawConfig) -> [String; 7] {
    [
        raw.n.to_string(),
        fmt_f64(raw.g),
        fmt_f64(raw.phi),
        fmt_f64(raw.r),
        fmt_f64(raw.gamma),
        fmt_f64(raw.q_keep_to_discard),
        fmt_f64(raw.q_discard_to_keep),
    ]
}

/// Shortest decimal that round-trips.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        ryu::Buffer::new().format_finite(x).to_string()
    } else {
        String::new()
    }
}

impl Record {
    /// `ok`, or `name: reason` entries joined by `; `.
    pub fn status(&self) -> String {
        let reasons: Vec<String> = OBSERVABLE_COLUMNS
            .iter()
            .zip(&self.values)
            .filter_map(|(name, v)| v.as_ref().err().map(|r| format!("{name}: {r}")))
            .collect();
        if reasons.is_empty() {
            "ok".to_string()
        } else {
            reasons.join("; ")
        }
    }

    pub fn get(&self, name: &str) -> Option<&Cell> {
        OBSERVABLE_COLUMNS
            .iter()
            .position(|c| *c == name)
            .map(|k| &self.values[k])
    }

    /// Header matching [`Record::csv_row`].
    pub fn csv_header() -> Vec<&'static str> {
        let mut h: Vec<&str> = CONFIG_COLUMNS.to_vec();
        h.extend(OBSERVABLE_COLUMNS);
        h.push("status");
        h
    }

    /// Undefined values become empty cells.
    pub fn csv_row(&self) -> Vec<String> {
        let mut row: Vec<String> = config_cells(&self.config).to_vec();
        row.extend(
            self.values
                .iter()
                .map(|v| v.as_ref().map(|x| fmt_f64(*x)).unwrap_or_default()),
        );
        row.push(self.status());
        row
    }

    /// Undefined values become `null`; their reasons go under `reasons`.
    pub fn to_json(&self, variants: Variants) -> Value {
        let raw = &self.config;
        let mut config = Map::new();
        config.insert("n".into(), raw.n.into());
        config.insert("g".into(), raw.g.into());
        config.insert("phi".into(), raw.phi.into());
        config.insert("r".into(), raw.r.into());
        config.insert("gamma".into(), raw.gamma.into());
        config.insert("q_keep_to_discard".into(), raw.q_keep_to_discard.into());
        config.insert("q_discard_to_keep".into(), raw.q_discard_to_keep.into());

        let mut observables = Map::new();
        let mut reasons = Map::new();
        for (name, v) in OBSERVABLE_COLUMNS.iter().zip(&self.values) {
            match v {
                Ok(x) => {
                    observables.insert((*name).into(), (*x).into());
                }
                Err(reason) => {
                    observables.insert((*name).into(), Value::Null);
                    reasons.insert((*name).into(), reason.clone().into());
                }
            }
        }

        let mut doc = Map::new();
        doc.insert("config".into(), Value::Object(config));
        doc.insert(
            "qfi_form".into(),
            match variants.qfi_form {
                QfiForm::Derived => "derived",
                QfiForm::AsPrinted => "as-printed",
            }
            .into(),
        );
        doc.insert(
            "recycle_variant".into(),
            match variants.recycle {
                RecycleVariant::Exact => "exact",
                RecycleVariant::Linear => "linear",
            }
            .into(),
        );
        doc.insert("observables".into(), Value::Object(observables));
        doc.insert("reasons".into(), Value::Object(reasons));
        doc.insert("status".into(), self.status().into());
        Value::Object(doc)
    }
}
