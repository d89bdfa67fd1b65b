//! Sample-complexity bound, hardness declarations and operation counts.

use std::fmt;
use std::str::FromStr;

use super::{AnalysisReport, EvalCounts, Metric};
use crate::error::{Error, Result};
use crate::strata::Concern;
use crate::trace::Trace;

/// `m = ceil((ln |H| + ln(1/δ)) / ε)`, the realizable finite-class bound.
pub fn sample_complexity_bound(class_size: u64, epsilon: f64, delta: f64) -> Result<u64> {
    let out_of_range = |name: &str, value: String, expected: &str| Error::OutOfRangeParameter {
        name: name.to_owned(),
        value,
        expected: expected.to_owned(),
    };
    if class_size < 1 {
        return Err(out_of_range("class_size", class_size.to_string(), ">= 1"));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(out_of_range("epsilon", epsilon.to_string(), "0 < epsilon < 1"));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(out_of_range("delta", delta.to_string(), "0 < delta < 1"));
    }
    let m = ((class_size as f64).ln() + (1.0 / delta).ln()) / epsilon;
    Ok(m.ceil() as u64)
}

pub fn sample_complexity_finite(class_size: u64, epsilon: f64, delta: f64) -> Result<AnalysisReport> {
    let m = sample_complexity_bound(class_size, epsilon, delta)?;
    Ok(AnalysisReport::new(Concern::SampleComplexity)
        .input("class_size", class_size)
        .input("epsilon", epsilon)
        .input("delta", delta)
        .metric("m", Metric::Count(m))
        .note("standard realizable finite-class bound m >= (ln|H| + ln(1/delta)) / epsilon")
        .note("distribution-free"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HardnessClass {
    P,
    NpComplete,
    NpHard,
    #[default]
    Unknown,
}

impl fmt::Display for HardnessClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HardnessClass::P => "P",
            HardnessClass::NpComplete => "NP-complete",
            HardnessClass::NpHard => "NP-hard",
            HardnessClass::Unknown => "unknown",
        })
    }
}

impl FromStr for HardnessClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "P" => Ok(HardnessClass::P),
            "NP-complete" => Ok(HardnessClass::NpComplete),
            "NP-hard" => Ok(HardnessClass::NpHard),
            "unknown" => Ok(HardnessClass::Unknown),
            other => Err(Error::UnknownTag(other.to_owned())),
        }
    }
}

/// Echoes a declared hardness class; nothing is verified.
pub fn hardness_tag(decl: Option<&str>) -> Result<AnalysisReport> {
    let class: HardnessClass = decl.map(str::parse).transpose()?.unwrap_or_default();
    Ok(AnalysisReport::new(Concern::Hardness)
        .input("declared", class)
        .note("user-declared; not verified"))
}

/// Goal evaluations and seeking applications of the last traced run.
pub fn algorithmic_cost(last_run: Option<&Trace>) -> Result<AnalysisReport> {
    let trace = last_run.filter(|t| t.has_run()).ok_or(Error::NoTracedRun)?;
    let mut report = AnalysisReport::new(Concern::AlgorithmicComplexity)
        .input("run", trace.label.as_deref().unwrap_or("unnamed"))
        .metric("g_evaluations", Metric::Count(trace.g_evals))
        .metric("e_applications", Metric::Count(trace.e_apps))
        .note("operation counts only; no wall-clock timing");
    report.eval_counts = EvalCounts::from(trace);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_hypothesis_bound() {
        assert_eq!(sample_complexity_bound(1, 0.5, 0.5).unwrap(), 2);
    }

    #[test]
    fn hundred_hypotheses_bound() {
        // ceil(10 * (ln 100 + ln 20)) = ceil(76.009...) computed offline
        assert_eq!(sample_complexity_bound(100, 0.1, 0.05).unwrap(), 77);
    }

    #[test]
    fn doubling_class_adds_at_most_ln2_over_eps() {
        for eps in [0.05, 0.1, 0.3] {
            let step = (2f64.ln() / eps).ceil() as u64;
            for size in [1u64, 3, 17, 1000] {
                let a = sample_complexity_bound(size, eps, 0.1).unwrap();
                let b = sample_complexity_bound(size * 2, eps, 0.1).unwrap();
                assert!(b >= a && b - a <= step);
            }
        }
    }

    #[test]
    fn bound_rejects_out_of_range() {
        assert!(sample_complexity_bound(0, 0.1, 0.1).is_err());
        assert!(sample_complexity_bound(1, 0.0, 0.1).is_err());
        assert!(sample_complexity_bound(1, 0.1, 1.0).is_err());
    }

    #[test]
    fn hardness_examples() {
        let r = hardness_tag(Some("NP-complete")).unwrap();
        assert_eq!(r.inputs["declared"], "NP-complete");
        assert_eq!(r.notes, vec!["user-declared; not verified"]);
        assert_eq!(hardness_tag(Some("unknown")).unwrap().inputs["declared"], "unknown");
        assert_eq!(hardness_tag(None).unwrap().inputs["declared"], "unknown");
        assert_eq!(hardness_tag(Some("EXP")).unwrap_err(), Error::UnknownTag("EXP".into()));
    }

    #[test]
    fn cost_needs_a_run() {
        assert_eq!(algorithmic_cost(None).unwrap_err(), Error::NoTracedRun);
        assert_eq!(algorithmic_cost(Some(&Trace::new())).unwrap_err(), Error::NoTracedRun);
    }
}
