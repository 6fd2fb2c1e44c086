use std::fmt::{self, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::matrices::{AccountFeatures, BowFeatures, FeatureSet, FoldThemes, ThemeSource};
use super::RunConfig;
use crate::lexicons::Family;
use ndarray::Axis;

use crate::features::FeatureSchema;
use crate::model::{cross_validate, EvalReport, FoldFeatures, Metrics, ModelError, Predictor};

/// Inputs shared by every evaluated method.
pub struct ReportInputs<'a> {
    pub y: &'a [u8],
    pub features: &'a AccountFeatures,
    pub bow_documents: &'a [Vec<String>],
    /// Present when LDA is refitted on each training fold.
    pub fold_themes: Option<&'a FoldThemes<'a>>,
}

/// A row of the comparison table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Random,
    Majority,
    Network,
    Bow,
    /// One lexicon family, aggregated per theme (`themes`) or globally.
    Family { family: Family, themes: bool },
    /// All enabled lexicon families.
    ThemeBased { themes: bool },
    Stylistic,
    Nli,
    /// Theme-based (per theme) plus profiling features.
    All,
}

impl Method {
    /// Canonical name accepted by [`FromStr`].
    pub fn key(&self) -> String {
        let suffix = |themes: bool| if themes { "+themes" } else { "-themes" };
        match self {
            Method::Random => "random".into(),
            Method::Majority => "majority".into(),
            Method::Network => "network".into(),
            Method::Bow => "bow".into(),
            Method::Family { family, themes } => format!("{}{}", family.as_str(), suffix(*themes)),
            Method::ThemeBased { themes } => format!("theme_based{}", suffix(*themes)),
            Method::Stylistic => "stylistic".into(),
            Method::Nli => "nli".into(),
            Method::All => "all".into(),
        }
    }

    pub fn display_name(&self) -> String {
        match self {
            Method::Random => "Random Selection".into(),
            Method::Majority => "Majority Class".into(),
            Method::Network => "Network Features".into(),
            Method::Bow => "Bag-of-Words".into(),
            Method::Family { family, .. } => family.display_name().into(),
            Method::ThemeBased { .. } => "All Theme-based".into(),
            Method::Stylistic => "Stylistic".into(),
            Method::Nli => "NLI".into(),
            Method::All => "All Features".into(),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (base, themes) = match s.strip_suffix("+themes") {
            Some(b) => (b, true),
            None => match s.strip_suffix("-themes") {
                Some(b) => (b, false),
                None => (s, true),
            },
        };
        let explicit = base.len() != s.len();
        let plain = |m: Method| if explicit { Err(format!("method {base:?} has no theme variants")) } else { Ok(m) };
        match base {
            "random" => plain(Method::Random),
            "majority" => plain(Method::Majority),
            "network" => plain(Method::Network),
            "bow" => plain(Method::Bow),
            "stylistic" => plain(Method::Stylistic),
            "nli" => plain(Method::Nli),
            "all" => plain(Method::All),
            "theme_based" => Ok(Method::ThemeBased { themes }),
            other => other
                .parse::<Family>()
                .map(|family| Method::Family { family, themes })
                .map_err(|_| format!("unknown method {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Section {
    Baseline,
    ThemeBased,
    Profiling,
    Combined,
}

impl Section {
    pub fn as_str(self) -> &'static str {
        match self {
            Section::Baseline => "baseline",
            Section::ThemeBased => "theme_based",
            Section::Profiling => "profiling",
            Section::Combined => "combined",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub section: Section,
    pub name: String,
    /// The per-theme variant for theme-based rows, the only variant otherwise.
    pub plus: EvalReport,
    /// The globally aggregated variant of theme-based rows.
    pub minus: Option<EvalReport>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub rows: Vec<ReportRow>,
}

fn theme_cols(schema: &FeatureSchema, families: &[Family]) -> Vec<usize> {
    let mut cols: Vec<usize> = families.iter().flat_map(|f| schema.family_indices(f.as_str())).collect();
    cols.sort_unstable();
    cols
}

fn profile_cols(features: &AccountFeatures, stylistic: bool, nli: bool) -> Vec<usize> {
    let mut families = Vec::new();
    if nli {
        families.extend(["stopwords", "pos", "deprel"]);
    }
    if stylistic {
        families.push("stylistic");
    }
    let mut cols: Vec<usize> = families
        .iter()
        .flat_map(|f| features.profile_schema.family_indices(f))
        .collect();
    cols.sort_unstable();
    cols
}

fn theme_block<'a>(inputs: &'a ReportInputs<'a>, families: &[Family], themes: bool) -> (ThemeSource<'a>, Vec<usize>) {
    let f = inputs.features;
    if themes {
        let source = match inputs.fold_themes {
            Some(ft) => ThemeSource::PerFold(ft),
            None => ThemeSource::Fixed(&f.themed),
        };
        (source, theme_cols(&f.themed_schema, families))
    } else {
        (ThemeSource::Fixed(&f.global), theme_cols(&f.global_schema, families))
    }
}

fn family_list(method: Method, config: &RunConfig) -> Vec<Family> {
    match method {
        Method::Family { family, .. } => vec![family],
        _ => config.enabled_families(),
    }
}

/// Fixed-width feature set of a logistic-regression method; `None` for the
/// trivial baselines and bag-of-words, whose columns are fitted per fold.
pub fn feature_set<'a>(method: Method, inputs: &'a ReportInputs<'a>, config: &RunConfig) -> Option<FeatureSet<'a>> {
    let f = inputs.features;
    let profile = |stylistic, nli| Some(f.profile.select(Axis(1), &profile_cols(f, stylistic, nli)));
    Some(match method {
        Method::Random | Method::Majority | Method::Bow => return None,
        Method::Network => FeatureSet {
            theme: None,
            extra: Some(f.network.clone()),
        },
        Method::Family { themes, .. } | Method::ThemeBased { themes } => FeatureSet {
            theme: Some(theme_block(inputs, &family_list(method, config), themes)),
            extra: None,
        },
        Method::Stylistic => FeatureSet {
            theme: None,
            extra: profile(true, false),
        },
        Method::Nli => FeatureSet {
            theme: None,
            extra: profile(false, true),
        },
        Method::All => {
            let families = config.enabled_families();
            FeatureSet {
                theme: (!families.is_empty()).then(|| theme_block(inputs, &families, true)),
                extra: profile(config.use_stylistic, config.use_nli).filter(|m| m.ncols() > 0),
            }
        }
    })
}

/// Column names matching [`feature_set`].
pub fn method_schema(method: Method, features: &AccountFeatures, config: &RunConfig) -> Option<FeatureSchema> {
    let theme = |themes: bool, families: &[Family]| {
        let schema = if themes { &features.themed_schema } else { &features.global_schema };
        schema.select(&theme_cols(schema, families))
    };
    let profile = |stylistic, nli| features.profile_schema.select(&profile_cols(features, stylistic, nli));
    Some(match method {
        Method::Random | Method::Majority | Method::Bow => return None,
        Method::Network => {
            let mut s = FeatureSchema::new();
            s.push("followers_log1p", "network");
            s.push("followees_log1p", "network");
            s
        }
        Method::Family { themes, .. } | Method::ThemeBased { themes } => theme(themes, &family_list(method, config)),
        Method::Stylistic => profile(true, false),
        Method::Nli => profile(false, true),
        Method::All => theme(true, &config.enabled_families()).concat(&profile(config.use_stylistic, config.use_nli)),
    })
}

/// Cross-validates one method.
pub fn evaluate_method(method: Method, inputs: &ReportInputs<'_>, config: &RunConfig) -> Result<EvalReport, ModelError> {
    let key = method.key();
    let run = |predictor: &Predictor, set: &dyn FoldFeatures| {
        cross_validate(&key, predictor, set, inputs.y, config.cv_k, config.cv_seed)
    };
    let empty = FeatureSet { theme: None, extra: None };
    match method {
        Method::Random => run(&Predictor::Random { seed: config.cv_seed }, &empty),
        Method::Majority => run(&Predictor::Majority, &empty),
        Method::Bow => run(
            &Predictor::LogisticRegression(config.train_config()),
            &BowFeatures {
                documents: inputs.bow_documents,
                max_terms: config.bow_max_terms,
            },
        ),
        _ => {
            let set = feature_set(method, inputs, config).expect("logistic-regression method");
            if set.theme.as_ref().is_none_or(|(_, cols)| cols.is_empty())
                && set.extra.as_ref().is_none_or(|m| m.ncols() == 0)
            {
                return Err(ModelError::Features(format!("method {key} has no enabled features")));
            }
            run(&Predictor::LogisticRegression(config.train_config()), &set)
        }
    }
}

/// Every enabled method, in table order.
pub fn run_report(inputs: &ReportInputs<'_>, config: &RunConfig) -> Result<Report, ModelError> {
    let mut rows = Vec::new();
    let mut single = |section, method: Method| -> Result<(), ModelError> {
        rows.push(ReportRow {
            section,
            name: method.display_name(),
            plus: evaluate_method(method, inputs, config)?,
            minus: None,
        });
        Ok(())
    };
    single(Section::Baseline, Method::Random)?;
    single(Section::Baseline, Method::Majority)?;
    if config.use_network {
        single(Section::Baseline, Method::Network)?;
    }
    if config.use_bow {
        single(Section::Baseline, Method::Bow)?;
    }
    let families = config.enabled_families();
    let mut paired = Vec::new();
    for &family in &families {
        paired.push(Method::Family { family, themes: true });
    }
    if families.len() > 1 {
        paired.push(Method::ThemeBased { themes: true });
    }
    for plus in paired {
        let minus = match plus {
            Method::Family { family, .. } => Method::Family { family, themes: false },
            _ => Method::ThemeBased { themes: false },
        };
        rows.push(ReportRow {
            section: Section::ThemeBased,
            name: plus.display_name(),
            plus: evaluate_method(plus, inputs, config)?,
            minus: Some(evaluate_method(minus, inputs, config)?),
        });
    }
    let mut single = |section, method: Method| -> Result<(), ModelError> {
        rows.push(ReportRow {
            section,
            name: method.display_name(),
            plus: evaluate_method(method, inputs, config)?,
            minus: None,
        });
        Ok(())
    };
    if config.use_stylistic {
        single(Section::Profiling, Method::Stylistic)?;
    }
    if config.use_nli {
        single(Section::Profiling, Method::Nli)?;
    }
    if !families.is_empty() || config.use_stylistic || config.use_nli {
        single(Section::Combined, Method::All)?;
    }
    Ok(Report { rows })
}

fn metric_fields(m: &Metrics) -> String {
    format!("{:.6},{:.6},{:.6}", m.precision_macro, m.recall_macro, m.f1_macro)
}

impl Report {
    pub fn row(&self, name: &str) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.name == name)
    }

    /// Long format: one line per (row, variant).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("section,method,variant,precision_macro,recall_macro,f1_macro\n");
        for row in &self.rows {
            let section = row.section.as_str();
            match &row.minus {
                Some(minus) => {
                    let _ = writeln!(out, "{section},{},-themes,{}", row.name, metric_fields(&minus.mean));
                    let _ = writeln!(out, "{section},{},+themes,{}", row.name, metric_fields(&row.plus.mean));
                }
                None => {
                    let _ = writeln!(out, "{section},{},,{}", row.name, metric_fields(&row.plus.mean));
                }
            }
        }
        out
    }

    /// Aligned text table. Theme-based rows show precision and recall of the
    /// per-theme variant and both F1 values.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<22} {:>15} {:>12} {:>9} {:>9}",
            "Method", "Precision_macro", "Recall_macro", "F1_macro", ""
        );
        let mut section = None;
        for row in &self.rows {
            if section != Some(row.section) {
                section = Some(row.section);
                match row.section {
                    Section::ThemeBased => {
                        let _ = writeln!(out, "{:<22} {:>15} {:>12} {:>9} {:>9}", "-- Theme-based", "", "", "-themes", "+themes");
                    }
                    Section::Profiling => {
                        let _ = writeln!(out, "-- Profiling");
                    }
                    Section::Combined => {
                        let _ = writeln!(out, "--");
                    }
                    Section::Baseline => {}
                }
            }
            let m = &row.plus.mean;
            match &row.minus {
                Some(minus) => {
                    let _ = writeln!(
                        out,
                        "{:<22} {:>15.2} {:>12.2} {:>9.2} {:>9.2}",
                        row.name, m.precision_macro, m.recall_macro, minus.mean.f1_macro, m.f1_macro
                    );
                }
                None => {
                    let _ = writeln!(
                        out,
                        "{:<22} {:>15.2} {:>12.2} {:>9.2}",
                        row.name, m.precision_macro, m.recall_macro, m.f1_macro
                    );
                }
            }
        }
        out
    }
}

/// Per-fold metrics and confusion counts, then the mean.
pub fn eval_report_csv(report: &EvalReport) -> String {
    let mut out = String::from("method,fold,precision_macro,recall_macro,f1_macro,tp,fp,tn,fn\n");
    for f in &report.folds {
        let c = f.confusion;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            report.method,
            f.fold,
            metric_fields(&f.metrics),
            c.tp,
            c.fp,
            c.tn,
            c.fn_
        );
    }
    let c = report.confusion;
    let _ = writeln!(
        out,
        "{},mean,{},{},{},{},{}",
        report.method,
        metric_fields(&report.mean),
        c.tp,
        c.fp,
        c.tn,
        c.fn_
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn method_names_round_trip() {
        let mut all = vec![
            Method::Random,
            Method::Majority,
            Method::Network,
            Method::Bow,
            Method::Stylistic,
            Method::Nli,
            Method::All,
            Method::ThemeBased { themes: true },
            Method::ThemeBased { themes: false },
        ];
        for family in Family::ALL {
            all.push(Method::Family { family, themes: true });
            all.push(Method::Family { family, themes: false });
        }
        for m in all {
            assert_eq!(m.key().parse::<Method>().unwrap(), m);
        }
        assert_eq!("emotions".parse::<Method>().unwrap(), Method::Family { family: Family::Emotions, themes: true });
        assert!("majority+themes".parse::<Method>().is_err());
        assert!("tweet2vec".parse::<Method>().is_err());
    }
}
