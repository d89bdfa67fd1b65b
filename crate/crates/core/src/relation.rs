//! Finite sets, tuples and relations as subsets of Cartesian products.
//!
//! Everything here is extensional and canonically ordered: set elements are
//! sorted, relation tuples live in a `BTreeSet`. Component sets are compared
//! by name *and* contents; two sets with the same name but different elements
//! are a [`Error::ComponentMismatch`].

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;

/// Element of a component set. Integers order numerically and sort before
/// symbols; symbols order lexicographically (byte order).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Atom {
    Int(i64),
    Sym(String),
}

impl Atom {
    pub fn sym(s: impl Into<String>) -> Self {
        Atom::Sym(s.into())
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Atom::Int(i) => Some(*i),
            Atom::Sym(_) => None,
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Int(i) => write!(f, "{i}"),
            Atom::Sym(s) => write!(f, "{s}"),
        }
    }
}

impl From<i64> for Atom {
    fn from(i: i64) -> Self {
        Atom::Int(i)
    }
}

impl From<&str> for Atom {
    fn from(s: &str) -> Self {
        Atom::Sym(s.to_owned())
    }
}

pub type Tuple = Vec<Atom>;

/// A named finite set with elements in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteSet {
    name: String,
    elements: Vec<Atom>,
}

impl FiniteSet {
    /// Builds a set, rejecting repeated elements.
    pub fn new(name: impl Into<String>, elements: impl IntoIterator<Item = Atom>) -> Result<Self> {
        let name = name.into();
        let mut elements: Vec<Atom> = elements.into_iter().collect();
        elements.sort();
        if let Some(w) = elements.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateElement {
                set: name,
                element: w[0].clone(),
            });
        }
        Ok(FiniteSet { name, elements })
    }

    /// Builds a set from any iterator, dropping repeats.
    pub fn collect(name: impl Into<String>, elements: impl IntoIterator<Item = Atom>) -> Self {
        let elements: BTreeSet<Atom> = elements.into_iter().collect();
        FiniteSet {
            name: name.into(),
            elements: elements.into_iter().collect(),
        }
    }

    pub fn ints(name: impl Into<String>, range: impl IntoIterator<Item = i64>) -> Self {
        Self::collect(name, range.into_iter().map(Atom::Int))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn elements(&self) -> &[Atom] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, a: &Atom) -> bool {
        self.elements.binary_search(a).is_ok()
    }

    /// Position of `a` in canonical order.
    pub fn index_of(&self, a: &Atom) -> Option<usize> {
        self.elements.binary_search(a).ok()
    }

    pub fn renamed(&self, name: impl Into<String>) -> Self {
        FiniteSet {
            name: name.into(),
            elements: self.elements.clone(),
        }
    }

    /// Same name and same elements.
    pub fn same_as(&self, other: &FiniteSet) -> bool {
        self == other
    }
}

/// A named relation over an ordered sequence of component sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    name: String,
    components: Vec<FiniteSet>,
    tuples: BTreeSet<Tuple>,
}

impl Relation {
    pub fn new(
        name: impl Into<String>,
        components: Vec<FiniteSet>,
        tuples: impl IntoIterator<Item = Tuple>,
    ) -> Result<Self> {
        let mut rel = Self::empty(name, components)?;
        for t in tuples {
            rel.check_tuple(&t)?;
            rel.tuples.insert(t);
        }
        Ok(rel)
    }

    pub fn empty(name: impl Into<String>, components: Vec<FiniteSet>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::NoComponents);
        }
        Ok(Relation {
            name: name.into(),
            components,
            tuples: BTreeSet::new(),
        })
    }

    /// The diagonal `{(a, a)}` over `set x set`.
    pub fn identity(name: impl Into<String>, set: &FiniteSet) -> Self {
        Relation {
            name: name.into(),
            components: vec![set.clone(), set.clone()],
            tuples: set.elements().iter().map(|a| vec![a.clone(), a.clone()]).collect(),
        }
    }

    fn check_tuple(&self, t: &[Atom]) -> Result<()> {
        if t.len() != self.arity() {
            return Err(Error::ArityMismatch {
                relation: self.name.clone(),
                expected: self.arity(),
                found: t.len(),
            });
        }
        for (position, (a, set)) in t.iter().zip(&self.components).enumerate() {
            if !set.contains(a) {
                return Err(Error::ElementNotInComponent {
                    relation: self.name.clone(),
                    position,
                    component: set.name().to_owned(),
                    element: a.clone(),
                });
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn components(&self) -> &[FiniteSet] {
        &self.components
    }

    pub fn component_names(&self) -> Vec<&str> {
        self.components.iter().map(FiniteSet::name).collect()
    }

    pub fn arity(&self) -> usize {
        self.components.len()
    }

    pub fn tuples(&self) -> impl ExactSizeIterator<Item = &Tuple> + '_ {
        self.tuples.iter()
    }

    pub fn tuple_set(&self) -> &BTreeSet<Tuple> {
        &self.tuples
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    /// Unchecked membership; see [`member`] for the arity-checked form.
    pub fn contains(&self, t: &[Atom]) -> bool {
        self.tuples.contains(t)
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_tuple(&self, t: Tuple) -> Result<Self> {
        self.check_tuple(&t)?;
        let mut out = self.clone();
        out.tuples.insert(t);
        Ok(out)
    }

    pub fn without_tuple(&self, t: &[Atom]) -> Self {
        let mut out = self.clone();
        out.tuples.remove(t);
        out
    }

    /// Same tuples over the same components (names ignored).
    pub fn same_graph(&self, other: &Relation) -> bool {
        self.components == other.components && self.tuples == other.tuples
    }

    /// Maps each domain projection to the codomain projections it occurs with.
    pub fn image_map(&self, domain: &[usize], codomain: &[usize]) -> BTreeMap<Tuple, Vec<Tuple>> {
        let mut map: BTreeMap<Tuple, Vec<Tuple>> = BTreeMap::new();
        for t in &self.tuples {
            let k: Tuple = domain.iter().map(|&i| t[i].clone()).collect();
            let v: Tuple = codomain.iter().map(|&i| t[i].clone()).collect();
            map.entry(k).or_default().push(v);
        }
        map
    }

    /// Lookup table for a relation read as a function of all but its last
    /// position. Keys with several images keep only the first (canonical) one.
    pub fn last_as_function(&self) -> HashMap<Tuple, Atom> {
        let n = self.arity();
        let mut map = HashMap::with_capacity(self.tuples.len());
        for t in &self.tuples {
            map.entry(t[..n - 1].to_vec()).or_insert_with(|| t[n - 1].clone());
        }
        map
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if index >= self.arity() {
            return Err(Error::IndexOutOfRange {
                relation: self.name.clone(),
                index,
                arity: self.arity(),
            });
        }
        Ok(())
    }
}

/// Full product of the given sets, in canonical order.
pub fn cartesian_product(sets: &[FiniteSet]) -> Result<Relation> {
    if sets.is_empty() {
        return Err(Error::NoComponents);
    }
    if let Some(empty) = sets.iter().find(|s| s.is_empty()) {
        return Err(Error::EmptyComponent(empty.name().to_owned()));
    }
    let mut tuples: Vec<Tuple> = vec![Vec::new()];
    for set in sets {
        tuples = tuples
            .into_iter()
            .flat_map(|prefix| {
                set.elements().iter().map(move |a| {
                    let mut t = prefix.clone();
                    t.push(a.clone());
                    t
                })
            })
            .collect();
    }
    let name = sets.iter().map(FiniteSet::name).collect::<Vec<_>>().join("x");
    Ok(Relation {
        name,
        components: sets.to_vec(),
        tuples: tuples.into_iter().collect(),
    })
}

/// Projection onto `indices` (in the given order), deduplicated.
pub fn project(rel: &Relation, indices: &[usize]) -> Result<Relation> {
    let mut seen = BTreeSet::new();
    for &i in indices {
        rel.check_index(i)?;
        if !seen.insert(i) {
            return Err(Error::DuplicateIndex {
                relation: rel.name.clone(),
                index: i,
            });
        }
    }
    if indices.is_empty() {
        return Err(Error::NoComponents);
    }
    Ok(Relation {
        name: rel.name.clone(),
        components: indices.iter().map(|&i| rel.components[i].clone()).collect(),
        tuples: rel
            .tuples
            .iter()
            .map(|t| indices.iter().map(|&i| t[i].clone()).collect())
            .collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Functionality {
    pub functional: bool,
    pub total: bool,
}

impl Functionality {
    pub fn holds(self) -> bool {
        self.functional && self.total
    }
}

/// Whether `rel`, read from `domain` positions to `codomain` positions, is a
/// (partial) function and whether it is defined on every domain combination.
pub fn is_functional(rel: &Relation, domain: &[usize], codomain: &[usize]) -> Result<Functionality> {
    for &i in domain.iter().chain(codomain) {
        rel.check_index(i)?;
    }
    if let Some(&i) = domain.iter().find(|i| codomain.contains(i)) {
        return Err(Error::OverlappingPositions {
            relation: rel.name.clone(),
            index: i,
        });
    }
    let images = rel.image_map(domain, codomain);
    let functional = images.values().all(|v| {
        let distinct: BTreeSet<&Tuple> = v.iter().collect();
        distinct.len() <= 1
    });
    let combinations = domain
        .iter()
        .try_fold(1u128, |acc, &i| acc.checked_mul(rel.components[i].len() as u128));
    let total = combinations == Some(images.len() as u128);
    Ok(Functionality { functional, total })
}

/// Relational composition joining `r1` and `r2` on the paired positions.
/// The result keeps the unpaired components of `r1` followed by those of `r2`.
pub fn compose(r1: &Relation, r2: &Relation, shared: &[(usize, usize)]) -> Result<Relation> {
    compose_with(Exec::default(), r1, r2, shared)
}

pub fn compose_with(
    exec: Exec,
    r1: &Relation,
    r2: &Relation,
    shared: &[(usize, usize)],
) -> Result<Relation> {
    let mut left_seen = BTreeSet::new();
    let mut right_seen = BTreeSet::new();
    for &(i, j) in shared {
        r1.check_index(i)?;
        r2.check_index(j)?;
        if !left_seen.insert(i) {
            return Err(Error::DuplicateIndex {
                relation: r1.name.clone(),
                index: i,
            });
        }
        if !right_seen.insert(j) {
            return Err(Error::DuplicateIndex {
                relation: r2.name.clone(),
                index: j,
            });
        }
        if !r1.components[i].same_as(&r2.components[j]) {
            return Err(Error::ComponentMismatch {
                left: format!("{}[{}]={}", r1.name, i, r1.components[i].name()),
                right: format!("{}[{}]={}", r2.name, j, r2.components[j].name()),
            });
        }
    }
    let keep1: Vec<usize> = (0..r1.arity()).filter(|i| !left_seen.contains(i)).collect();
    let keep2: Vec<usize> = (0..r2.arity()).filter(|j| !right_seen.contains(j)).collect();
    let components: Vec<FiniteSet> = keep1
        .iter()
        .map(|&i| r1.components[i].clone())
        .chain(keep2.iter().map(|&j| r2.components[j].clone()))
        .collect();
    if components.is_empty() {
        return Err(Error::NoComponents);
    }

    let right_keys: Vec<usize> = shared.iter().map(|&(_, j)| j).collect();
    let index = r2.image_map(&right_keys, &keep2);
    let left: Vec<&Tuple> = r1.tuples.iter().collect();
    let joined = exec.map(&left, |t1| {
        let key: Tuple = shared.iter().map(|&(i, _)| t1[i].clone()).collect();
        let head: Tuple = keep1.iter().map(|&i| t1[i].clone()).collect();
        index
            .get(&key)
            .map(|rests| {
                rests
                    .iter()
                    .map(|rest| head.iter().chain(rest).cloned().collect::<Tuple>())
                    .collect::<Vec<_>>()
            })
            .unwrap_or_default()
    });
    Ok(Relation {
        name: format!("{};{}", r1.name, r2.name),
        components,
        tuples: joined.into_iter().flatten().collect(),
    })
}

pub fn member(rel: &Relation, tuple: &[Atom]) -> Result<bool> {
    if tuple.len() != rel.arity() {
        return Err(Error::ArityMismatch {
            relation: rel.name.clone(),
            expected: rel.arity(),
            found: tuple.len(),
        });
    }
    Ok(rel.contains(tuple))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn syms(name: &str, xs: &[&str]) -> FiniteSet {
        FiniteSet::new(name, xs.iter().map(|&s| Atom::from(s))).unwrap()
    }

    fn t(xs: &[Atom]) -> Tuple {
        xs.to_vec()
    }

    fn a(s: &str) -> Atom {
        Atom::from(s)
    }

    fn i(v: i64) -> Atom {
        Atom::Int(v)
    }

    #[test]
    fn atom_order_puts_integers_first() {
        let mut v = vec![a("b"), i(10), a("a"), i(-3), i(2)];
        v.sort();
        assert_eq!(v, vec![i(-3), i(2), i(10), a("a"), a("b")]);
    }

    #[test]
    fn finite_set_rejects_duplicates() {
        let err = FiniteSet::new("S", vec![i(1), i(1)]).unwrap_err();
        assert!(matches!(err, Error::DuplicateElement { .. }));
        let s = FiniteSet::new("S", vec![i(3), i(1)]).unwrap();
        assert_eq!(s.elements(), &[i(1), i(3)]);
    }

    #[test]
    fn product_examples() {
        let ab = syms("L", &["a", "b"]);
        let bits = FiniteSet::ints("B", 0..2);
        let p = cartesian_product(&[ab, bits.clone()]).unwrap();
        let got: Vec<_> = p.tuples().cloned().collect();
        assert_eq!(
            got,
            vec![
                t(&[a("a"), i(0)]),
                t(&[a("a"), i(1)]),
                t(&[a("b"), i(0)]),
                t(&[a("b"), i(1)])
            ]
        );
        let single = cartesian_product(&[syms("L", &["a"]), FiniteSet::ints("B", 0..1)]).unwrap();
        assert_eq!(single.len(), 1);
        let abc = syms("L", &["a", "b", "c"]);
        assert_eq!(cartesian_product(&[abc, bits]).unwrap().len(), 6);

        let err = cartesian_product(&[syms("E", &[])]).unwrap_err();
        assert_eq!(err, Error::EmptyComponent("E".into()));
        assert_eq!(cartesian_product(&[]).unwrap_err(), Error::NoComponents);
    }

    #[test]
    fn projection_examples() {
        let l = syms("L", &["a"]);
        let b = FiniteSet::ints("B", 0..2);
        let z = syms("Z", &["x"]);
        let r = Relation::new("r", vec![l.clone(), b.clone(), z], vec![t(&[a("a"), i(0), a("x")])]).unwrap();
        let p = project(&r, &[0, 1]).unwrap();
        assert_eq!(p.tuples().cloned().collect::<Vec<_>>(), vec![t(&[a("a"), i(0)])]);

        let r2 = Relation::new("r", vec![l, b], vec![t(&[a("a"), i(0)]), t(&[a("a"), i(1)])]).unwrap();
        assert_eq!(project(&r2, &[0]).unwrap().len(), 1);

        assert!(matches!(project(&r2, &[2]), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(project(&r2, &[0, 0]), Err(Error::DuplicateIndex { .. })));
    }

    #[test]
    fn projection_of_cube_is_square() {
        let s = FiniteSet::ints("S", 0..2);
        let cube = cartesian_product(&[s.clone(), s.clone(), s.clone()]).unwrap();
        let square = cartesian_product(&[s.clone(), s]).unwrap();
        assert!(project(&cube, &[0, 2]).unwrap().same_graph(&square));
    }

    #[test]
    fn functionality_examples() {
        let l = syms("L", &["a", "b"]);
        let b = FiniteSet::ints("B", 0..2);
        let bij = Relation::new("f", vec![l.clone(), b.clone()], vec![t(&[a("a"), i(0)]), t(&[a("b"), i(1)])]).unwrap();
        assert_eq!(
            is_functional(&bij, &[0], &[1]).unwrap(),
            Functionality { functional: true, total: true }
        );
        let only_a = syms("L", &["a"]);
        let many = Relation::new("m", vec![only_a, b.clone()], vec![t(&[a("a"), i(0)]), t(&[a("a"), i(1)])]).unwrap();
        assert_eq!(
            is_functional(&many, &[0], &[1]).unwrap(),
            Functionality { functional: false, total: true }
        );
        let partial = Relation::new("p", vec![l, b], vec![t(&[a("a"), i(0)])]).unwrap();
        assert_eq!(
            is_functional(&partial, &[0], &[1]).unwrap(),
            Functionality { functional: true, total: false }
        );
        assert!(matches!(
            is_functional(&partial, &[0], &[0]),
            Err(Error::OverlappingPositions { .. })
        ));
    }

    #[test]
    fn compose_examples() {
        let l = syms("L", &["a"]);
        let m = syms("M", &["m"]);
        let b = FiniteSet::ints("B", 0..2);
        let r1 = Relation::new("r1", vec![l.clone(), m.clone()], vec![t(&[a("a"), a("m")])]).unwrap();
        let r2 = Relation::new("r2", vec![m.clone(), b.clone()], vec![t(&[a("m"), i(0)])]).unwrap();
        let c = compose(&r1, &r2, &[(1, 0)]).unwrap();
        assert_eq!(c.component_names(), vec!["L", "B"]);
        assert_eq!(c.tuples().cloned().collect::<Vec<_>>(), vec![t(&[a("a"), i(0)])]);

        let id = Relation::identity("id", &m);
        assert!(compose(&r1, &id, &[(1, 0)]).unwrap().same_graph(&r1));

        let err = compose(&r1, &r2, &[(0, 0)]).unwrap_err();
        assert!(matches!(err, Error::ComponentMismatch { .. }));
    }

    #[test]
    fn member_examples() {
        let l = syms("L", &["a"]);
        let b = FiniteSet::ints("B", 0..2);
        let r = Relation::new("r", vec![l.clone(), b.clone()], vec![t(&[a("a"), i(0)])]).unwrap();
        assert!(member(&r, &[a("a"), i(0)]).unwrap());
        assert!(!member(&r, &[a("a"), i(1)]).unwrap());
        assert!(matches!(member(&r, &[a("a")]), Err(Error::ArityMismatch { .. })));
        let full = cartesian_product(&[l, b]).unwrap();
        assert!(member(&full, &[a("a"), i(1)]).unwrap());
    }

    #[test]
    fn relation_rejects_ill_typed_tuples() {
        let b = FiniteSet::ints("B", 0..2);
        let err = Relation::new("r", vec![b], vec![vec![Atom::Int(5)]]).unwrap_err();
        assert!(matches!(err, Error::ElementNotInComponent { position: 0, .. }));
    }
}
