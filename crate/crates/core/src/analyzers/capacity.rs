//! Growth functions, VC dimension by exhaustive shattering, local capacity,
//! falsifiability and flexibility of a hypothesis class `H(Θ)`.
//!
//! The VC search works on bitmask labelings: for binary `Y` each hypothesis
//! becomes one `u64` over the sample positions, and restricting to a subset is
//! a mask. Subsets of each size are scanned in lexicographic order so the
//! reported witness is the first shattered subset, whatever the execution
//! strategy.

use std::collections::{BTreeSet, HashSet};

use super::hypotheses::HypothesisTable;
use super::{atoms_str, AnalysisReport, Metric, RECONSTRUCTED};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::relation::{Atom, Relation};
use crate::strata::Concern;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CapacityLimits {
    /// Largest sample on which labelings are enumerated.
    pub max_sample: usize,
    /// Largest subset size the shattering search may be asked for.
    pub max_subset: usize,
}

impl Default for CapacityLimits {
    fn default() -> Self {
        CapacityLimits {
            max_sample: 20,
            max_subset: 12,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DichotomyTable {
    pub sample: Vec<Atom>,
    pub labelings: BTreeSet<Vec<Atom>>,
}

impl DichotomyTable {
    pub fn count(&self) -> usize {
        self.labelings.len()
    }
}

fn check_distinct(sample: &[Atom]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for a in sample {
        if !seen.insert(a) {
            return Err(Error::DuplicateElement {
                set: "sample".to_owned(),
                element: a.clone(),
            });
        }
    }
    Ok(())
}

/// Distinct restrictions of `H(θ, ·)` to `sample`, over all `θ`.
pub fn growth_function(hyp: &Relation, sample: &[Atom]) -> Result<DichotomyTable> {
    growth_function_with(hyp, sample, &CapacityLimits::default(), Exec::default())
}

pub fn growth_function_with(
    hyp: &Relation,
    sample: &[Atom],
    limits: &CapacityLimits,
    exec: Exec,
) -> Result<DichotomyTable> {
    let table = HypothesisTable::new(hyp)?;
    table_growth(&table, sample, limits, exec)
}

fn table_growth(
    table: &HypothesisTable,
    sample: &[Atom],
    limits: &CapacityLimits,
    exec: Exec,
) -> Result<DichotomyTable> {
    if sample.len() > limits.max_sample {
        return Err(Error::SampleTooLarge {
            size: sample.len(),
            limit: limits.max_sample,
        });
    }
    check_distinct(sample)?;
    let xi = table.x_indices(sample)?;
    let thetas: Vec<usize> = (0..table.params().len()).collect();
    let ys = table.y_set().elements();
    let rows = exec.map(&thetas, |&t| {
        xi.iter()
            .map(|&x| ys[table.label_index(t, x)].clone())
            .collect::<Vec<Atom>>()
    });
    Ok(DichotomyTable {
        sample: sample.to_vec(),
        labelings: rows.into_iter().collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VcResult {
    /// Size of the largest shattered subset found (at most `max_subset`).
    pub dimension: usize,
    /// First shattered subset of that size, in sample order.
    pub witness: Vec<Atom>,
    /// The search stopped at the cap rather than at a non-shattered size.
    pub capped: bool,
}

/// Distinct labelings of the sample as bitmasks (bit `i` set when the label of
/// `sample[i]` is the larger element of the binary `Y`).
fn label_masks(table: &HypothesisTable, xi: &[usize]) -> Vec<u64> {
    let masks: BTreeSet<u64> = (0..table.params().len())
        .map(|t| {
            xi.iter()
                .enumerate()
                .filter(|&(_, &x)| table.label_index(t, x) == 1)
                .fold(0u64, |m, (i, _)| m | (1 << i))
        })
        .collect();
    masks.into_iter().collect()
}

/// All `k`-subsets of `0..n` as bitmasks, lexicographic in their positions.
fn combinations(n: usize, k: usize) -> Vec<u64> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(idx.iter().fold(0u64, |m, &i| m | (1 << i)));
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn shattered(masks: &[u64], subset: u64, k: usize) -> bool {
    let need = 1usize << k;
    let mut seen = HashSet::with_capacity(need);
    for m in masks {
        seen.insert(m & subset);
        if seen.len() == need {
            return true;
        }
    }
    false
}

/// VC dimension of `H(Θ)` restricted to subsets of `sample` of size at most
/// `max_subset`, by exhaustive shattering search.
pub fn vc_dimension(hyp: &Relation, sample: &[Atom], max_subset: usize) -> Result<VcResult> {
    vc_dimension_with(hyp, sample, max_subset, &CapacityLimits::default(), Exec::default())
}

pub fn vc_dimension_with(
    hyp: &Relation,
    sample: &[Atom],
    max_subset: usize,
    limits: &CapacityLimits,
    exec: Exec,
) -> Result<VcResult> {
    let table = HypothesisTable::new(hyp)?;
    table_vc(&table, sample, max_subset, limits, exec)
}

fn table_vc(
    table: &HypothesisTable,
    sample: &[Atom],
    max_subset: usize,
    limits: &CapacityLimits,
    exec: Exec,
) -> Result<VcResult> {
    if table.y_set().len() != 2 {
        return Err(Error::NonBinaryOutput {
            set: table.y_set().name().to_owned(),
            size: table.y_set().len(),
        });
    }
    if max_subset > limits.max_subset {
        return Err(Error::OutOfRangeParameter {
            name: "max_subset".to_owned(),
            value: max_subset.to_string(),
            expected: format!("<= {}", limits.max_subset),
        });
    }
    if sample.len() > limits.max_sample.min(64) {
        return Err(Error::SampleTooLarge {
            size: sample.len(),
            limit: limits.max_sample.min(64),
        });
    }
    check_distinct(sample)?;
    let xi = table.x_indices(sample)?;
    let masks = label_masks(table, &xi);

    let mut best = VcResult {
        dimension: 0,
        witness: Vec::new(),
        capped: false,
    };
    for k in 0..=max_subset.min(sample.len()) {
        if (1usize << k) > masks.len() {
            break;
        }
        let subsets = combinations(sample.len(), k);
        match exec.find_first(&subsets, |&s| shattered(&masks, s, k)) {
            Some(&s) => {
                best.dimension = k;
                best.witness = (0..sample.len())
                    .filter(|i| s & (1 << i) != 0)
                    .map(|i| sample[i].clone())
                    .collect();
            }
            None => break,
        }
    }
    best.capped = best.dimension == max_subset;
    Ok(best)
}

/// Growth function on the full sample plus the capped VC dimension.
pub fn capacity(hyp: &Relation, sample: &[Atom], max_subset: usize) -> Result<AnalysisReport> {
    capacity_with(hyp, sample, max_subset, &CapacityLimits::default(), Exec::default())
}

pub fn capacity_with(
    hyp: &Relation,
    sample: &[Atom],
    max_subset: usize,
    limits: &CapacityLimits,
    exec: Exec,
) -> Result<AnalysisReport> {
    let table = HypothesisTable::new(hyp)?;
    let growth = table_growth(&table, sample, limits, exec)?;
    let mut report = AnalysisReport::new(Concern::Capacity)
        .input("hypotheses", hyp.name())
        .input("sample", atoms_str(sample))
        .input("max_subset", max_subset)
        .metric("growth_function", Metric::Count(growth.count() as u64))
        .metric("parameters", Metric::Count(table.params().len() as u64));
    match table_vc(&table, sample, max_subset, limits, exec) {
        Ok(vc) => {
            report = report
                .metric("vc_dimension", Metric::Count(vc.dimension as u64))
                .verdict("binary_output", true)
                .verdict("capped", vc.capped)
                .note(format!("vc witness: {}", atoms_str(&vc.witness)));
        }
        Err(Error::NonBinaryOutput { size, .. }) => {
            report = report
                .verdict("binary_output", false)
                .note(format!("vc search skipped: output set has {size} elements"));
        }
        Err(e) => return Err(e),
    }
    Ok(report)
}

/// Growth function per cell of a partition of `X`.
pub fn local_capacity(hyp: &Relation, cells: &[Vec<Atom>]) -> Result<AnalysisReport> {
    local_capacity_with(hyp, cells, &CapacityLimits::default(), Exec::default())
}

pub fn local_capacity_with(
    hyp: &Relation,
    cells: &[Vec<Atom>],
    limits: &CapacityLimits,
    exec: Exec,
) -> Result<AnalysisReport> {
    let table = HypothesisTable::new(hyp)?;
    let x_set = table.x_set();
    let not_partition = |reason: String| Error::NotAPartition {
        set: x_set.name().to_owned(),
        reason,
    };
    let mut seen: BTreeSet<&Atom> = BTreeSet::new();
    for (i, cell) in cells.iter().enumerate() {
        if cell.is_empty() {
            return Err(not_partition(format!("cell {i} is empty")));
        }
        for x in cell {
            if !x_set.contains(x) {
                return Err(not_partition(format!("{x} in cell {i} is not an element")));
            }
            if !seen.insert(x) {
                return Err(not_partition(format!("{x} appears in more than one cell")));
            }
        }
    }
    if let Some(missing) = x_set.elements().iter().find(|x| !seen.contains(x)) {
        return Err(not_partition(format!("{missing} is not covered")));
    }

    let counts = cells
        .iter()
        .map(|c| table_growth(&table, c, limits, exec).map(|g| g.count() as u64))
        .collect::<Result<Vec<_>>>()?;
    let varies = counts.windows(2).any(|w| w[0] != w[1]);
    Ok(AnalysisReport::new(Concern::Capacity)
        .input("hypotheses", hyp.name())
        .input("cells", cells.len())
        .metric("cell_growth", Metric::Counts(counts))
        .metric("cell_sizes", Metric::Counts(cells.iter().map(|c| c.len() as u64).collect()))
        .verdict("capacity_varies", varies)
        .note("local capacity: growth function restricted to each cell"))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FalsifiabilityResult {
    pub attained: usize,
    /// `|Y|^|sample|`, `None` when it overflows.
    pub possible: Option<u128>,
    /// First labeling (in lexicographic order) no hypothesis produces.
    pub unattained: Option<Vec<Atom>>,
}

impl FalsifiabilityResult {
    /// Counting route: fewer attained labelings than possible ones.
    pub fn by_count(&self) -> bool {
        self.possible.is_none_or(|p| (self.attained as u128) < p)
    }
}

pub fn falsifiability_result(hyp: &Relation, sample: &[Atom]) -> Result<FalsifiabilityResult> {
    let table = HypothesisTable::new(hyp)?;
    let growth = table_growth(&table, sample, &CapacityLimits::default(), Exec::default())?;
    let ys = table.y_set().elements();
    let possible = (0..sample.len()).try_fold(1u128, |acc, _| acc.checked_mul(ys.len() as u128));

    // Odometer over Y^n in lexicographic order; a gap shows up within the
    // first |attained| + 1 candidates.
    let mut unattained = None;
    if !ys.is_empty() {
        let mut digits = vec![0usize; sample.len()];
        loop {
            let candidate: Vec<Atom> = digits.iter().map(|&d| ys[d].clone()).collect();
            if !growth.labelings.contains(&candidate) {
                unattained = Some(candidate);
                break;
            }
            let Some(pos) = (0..digits.len()).rev().find(|&i| digits[i] + 1 < ys.len()) else {
                break;
            };
            digits[pos] += 1;
            for d in &mut digits[pos + 1..] {
                *d = 0;
            }
        }
    }
    Ok(FalsifiabilityResult {
        attained: growth.count(),
        possible,
        unattained,
    })
}

/// Whether some labeling of the sample is attained by no hypothesis.
pub fn falsifiability(hyp: &Relation, sample: &[Atom]) -> Result<AnalysisReport> {
    let r = falsifiability_result(hyp, sample)?;
    let mut report = AnalysisReport::new(Concern::Falsifiability)
        .input("hypotheses", hyp.name())
        .input("sample", atoms_str(sample))
        .metric("labelings_attained", Metric::Count(r.attained as u64))
        .verdict("falsifiable", r.unattained.is_some());
    report = match r.possible.and_then(|p| u64::try_from(p).ok()) {
        Some(p) => report.metric("labelings_possible", Metric::Count(p)),
        None => report.note("labelings_possible exceeds 2^64"),
    };
    if let Some(w) = &r.unattained {
        report = report.note(format!("unattained labeling: {}", atoms_str(w)));
    }
    Ok(report.note(RECONSTRUCTED))
}

/// Normalized Hamming distance between the labelings of neighboring
/// parameters: maximum and mean over the neighbor pairs.
pub fn flexibility(hyp: &Relation, neighbors: &Relation) -> Result<AnalysisReport> {
    let table = HypothesisTable::new(hyp)?;
    let params = table.params();
    if neighbors.arity() != 2 || neighbors.components().iter().any(|c| !c.same_as(params)) {
        return Err(Error::ComponentMismatch {
            left: format!("{}({})", neighbors.name(), neighbors.component_names().join(",")),
            right: format!("{0},{0}", params.name()),
        });
    }
    if neighbors.is_empty() {
        return Err(Error::EmptyNeighborRelation);
    }
    for t in neighbors.tuples() {
        if t[0] == t[1] || !neighbors.contains(&[t[1].clone(), t[0].clone()]) {
            return Err(Error::InvalidNeighborRelation {
                relation: neighbors.name().to_owned(),
                a: t[0].clone(),
                b: t[1].clone(),
            });
        }
    }

    let n = table.x_set().len();
    let rates: Vec<f64> = neighbors
        .tuples()
        .filter(|t| t[0] < t[1])
        .map(|t| {
            let a = table.labeling(params.index_of(&t[0]).expect("typed"));
            let b = table.labeling(params.index_of(&t[1]).expect("typed"));
            let diff = a.iter().zip(b).filter(|(p, q)| p != q).count();
            if n == 0 {
                0.0
            } else {
                diff as f64 / n as f64
            }
        })
        .collect();
    let max = rates.iter().copied().fold(0.0, f64::max);
    let mean = rates.iter().sum::<f64>() / rates.len() as f64;
    Ok(AnalysisReport::new(Concern::Flexibility)
        .input("hypotheses", hyp.name())
        .input("neighbors", neighbors.name())
        .metric("max_rate", Metric::Real(max))
        .metric("mean_rate", Metric::Real(mean))
        .metric("neighbor_pairs", Metric::Count(rates.len() as u64))
        .note(RECONSTRUCTED))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learners::{interval_class, threshold_class};
    use crate::relation::{cartesian_product, FiniteSet};

    #[test]
    fn combinations_are_lexicographic() {
        assert_eq!(combinations(4, 2), vec![0b0011, 0b0101, 0b1001, 0b0110, 0b1010, 0b1100]);
        assert_eq!(combinations(3, 0), vec![0]);
        assert_eq!(combinations(3, 3), vec![0b111]);
        assert!(combinations(2, 3).is_empty());
    }

    #[test]
    fn threshold_growth_and_vc() {
        let c = threshold_class(3).unwrap();
        let g = growth_function(&c.hyp, c.x_set.elements()).unwrap();
        assert_eq!(g.count(), 4);
        let vc = vc_dimension(&c.hyp, c.x_set.elements(), 3).unwrap();
        assert_eq!(vc.dimension, 1);
        assert_eq!(vc.witness, vec![Atom::Int(0)]);
        assert!(!vc.capped);
    }

    #[test]
    fn interval_vc_is_two() {
        let c = interval_class(4).unwrap();
        let vc = vc_dimension(&c.hyp, c.x_set.elements(), 4).unwrap();
        assert_eq!(vc.dimension, 2);
        assert_eq!(vc.witness, vec![Atom::Int(0), Atom::Int(1)]);
    }

    #[test]
    fn single_hypothesis_has_one_labeling() {
        let c = threshold_class(3).unwrap();
        let only = FiniteSet::new("Theta", vec![c.params.elements()[0].clone()]).unwrap();
        let hyp = Relation::new(
            "H",
            vec![only, c.x_set.clone(), c.y_set.clone()],
            c.hyp.tuples().filter(|t| t[0] == c.params.elements()[0]).cloned(),
        )
        .unwrap();
        assert_eq!(growth_function(&hyp, c.x_set.elements()).unwrap().count(), 1);
    }

    #[test]
    fn universal_class_shatters_everything() {
        let x = FiniteSet::ints("X", 0..3);
        let y = FiniteSet::ints("Y", 0..2);
        // one parameter per labeling of X
        let params = FiniteSet::ints("Theta", 0..8);
        let hyp = Relation::new(
            "H",
            vec![params.clone(), x.clone(), y.clone()],
            (0..8i64).flat_map(|t| (0..3i64).map(move |i| vec![Atom::Int(t), Atom::Int(i), Atom::Int((t >> i) & 1)])),
        )
        .unwrap();
        let vc = vc_dimension(&hyp, x.elements(), 3).unwrap();
        assert_eq!(vc.dimension, 3);
        assert!(vc.capped);
        let r = falsifiability(&hyp, x.elements()).unwrap();
        assert!(!r.verdicts["falsifiable"]);
    }

    #[test]
    fn errors() {
        let c = threshold_class(3).unwrap();
        let too_big: Vec<Atom> = (0..21).map(Atom::Int).collect();
        assert!(matches!(
            growth_function(&c.hyp, &too_big),
            Err(Error::SampleTooLarge { size: 21, limit: 20 })
        ));
        assert!(matches!(
            vc_dimension(&c.hyp, c.x_set.elements(), 13),
            Err(Error::OutOfRangeParameter { .. })
        ));
        let y3 = FiniteSet::ints("Y", 0..3);
        let hyp = Relation::new(
            "H",
            vec![FiniteSet::ints("Theta", 0..1), FiniteSet::ints("X", 0..1), y3],
            vec![vec![Atom::Int(0), Atom::Int(0), Atom::Int(2)]],
        )
        .unwrap();
        assert!(matches!(
            vc_dimension(&hyp, &[Atom::Int(0)], 1),
            Err(Error::NonBinaryOutput { size: 3, .. })
        ));
        let r = capacity(&hyp, &[Atom::Int(0)], 1).unwrap();
        assert!(!r.verdicts["binary_output"]);
        assert_eq!(r.metrics["growth_function"], Metric::Count(1));
    }

    #[test]
    fn local_capacity_examples() {
        let c = threshold_class(6).unwrap();
        let xs = c.x_set.elements();
        let r = local_capacity(&c.hyp, &[xs[..3].to_vec(), xs[3..].to_vec()]).unwrap();
        // each half of a threshold class sees 3 + 1 labelings
        assert_eq!(r.metrics["cell_growth"], Metric::Counts(vec![4, 4]));

        let err = local_capacity(&c.hyp, &[xs[..3].to_vec(), xs[2..].to_vec()]).unwrap_err();
        assert!(matches!(err, Error::NotAPartition { .. }));
        let err = local_capacity(&c.hyp, &[xs[..3].to_vec()]).unwrap_err();
        assert!(matches!(err, Error::NotAPartition { .. }));
    }

    #[test]
    fn local_capacity_constant_then_free() {
        // cell 1 = {0}: always labelled 0; cell 2 = {1, 2}: all four labelings
        let x = FiniteSet::ints("X", 0..3);
        let y = FiniteSet::ints("Y", 0..2);
        let params = FiniteSet::ints("Theta", 0..4);
        let hyp = Relation::new(
            "H",
            vec![params, x.clone(), y],
            (0..4i64).flat_map(|t| {
                [
                    vec![Atom::Int(t), Atom::Int(0), Atom::Int(0)],
                    vec![Atom::Int(t), Atom::Int(1), Atom::Int(t & 1)],
                    vec![Atom::Int(t), Atom::Int(2), Atom::Int((t >> 1) & 1)],
                ]
            }),
        )
        .unwrap();
        let xs = x.elements();
        let r = local_capacity(&hyp, &[vec![xs[0].clone()], xs[1..].to_vec()]).unwrap();
        assert_eq!(r.metrics["cell_growth"], Metric::Counts(vec![1, 4]));
        assert!(r.verdicts["capacity_varies"]);
    }

    #[test]
    fn flexibility_examples() {
        let c = threshold_class(5).unwrap();
        let ps = c.params.elements();
        let adjacent = Relation::new(
            "N",
            vec![c.params.clone(), c.params.clone()],
            ps.windows(2)
                .flat_map(|w| [vec![w[0].clone(), w[1].clone()], vec![w[1].clone(), w[0].clone()]]),
        )
        .unwrap();
        let r = flexibility(&c.hyp, &adjacent).unwrap();
        assert_eq!(r.metrics["max_rate"], Metric::Real(1.0 / 5.0));
        let mean = r.metrics["mean_rate"].as_f64().unwrap();
        assert!((mean - 0.2).abs() < 1e-12);

        let reflexive = Relation::identity("N", &c.params);
        assert!(matches!(
            flexibility(&c.hyp, &reflexive),
            Err(Error::InvalidNeighborRelation { .. })
        ));
        let empty = Relation::empty("N", vec![c.params.clone(), c.params.clone()]).unwrap();
        assert_eq!(flexibility(&c.hyp, &empty).unwrap_err(), Error::EmptyNeighborRelation);
    }

    #[test]
    fn flexibility_extremes() {
        let x = FiniteSet::ints("X", 0..3);
        let y = FiniteSet::ints("Y", 0..2);
        let params = FiniteSet::ints("Theta", 0..2);
        let all_pairs = cartesian_product(&[params.clone(), params.clone()]).unwrap();
        let neighbors = Relation::new("N", vec![params.clone(), params.clone()], all_pairs.tuples().filter(|t| t[0] != t[1]).cloned()).unwrap();

        let same = Relation::new(
            "H",
            vec![params.clone(), x.clone(), y.clone()],
            (0..2i64).flat_map(|t| (0..3i64).map(move |i| vec![Atom::Int(t), Atom::Int(i), Atom::Int(0)])),
        )
        .unwrap();
        assert_eq!(flexibility(&same, &neighbors).unwrap().metrics["max_rate"], Metric::Real(0.0));

        let opposite = Relation::new(
            "H",
            vec![params, x, y],
            (0..2i64).flat_map(|t| (0..3i64).map(move |i| vec![Atom::Int(t), Atom::Int(i), Atom::Int(t)])),
        )
        .unwrap();
        assert_eq!(flexibility(&opposite, &neighbors).unwrap().metrics["max_rate"], Metric::Real(1.0));
    }

    #[test]
    fn falsifiability_examples() {
        let c = threshold_class(3).unwrap();
        let r = falsifiability_result(&c.hyp, c.x_set.elements()).unwrap();
        assert_eq!((r.attained, r.possible), (4, Some(8)));
        assert!(r.by_count());
        assert!(r.unattained.is_some());
    }
}
