//! The JSON document format for finite systems.
//!
//! ```json
//! {
//!   "format_version": 1,
//!   "sets": {"X": [0, 1], "Y": [0, 1]},
//!   "relations": {"H": {"components": ["Theta", "X", "Y"], "tuples": [["t0", 0, 1]]}},
//!   "learning_system": {"X": "X", "Y": "Y", "H": "H", "mode": "batch",
//!                       "datasets": [{"id": "d0", "pairs": [[0, 1]]}]},
//!   "declarations": {"hardness": "P"}
//! }
//! ```
//!
//! Atoms are JSON integers or strings. `learning_system` binds the keys
//! `A, D, Theta, G, E, H, X, Y, V` to declared relations (`A, G, E, H`) and
//! sets (the rest); every key is optional so partial documents can still be
//! classified, and `V` defaults to the value component of `G`.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::{self, Deserializer, MapAccess, SeqAccess, Visitor};
use serde::Deserialize;
use serde_json::{json, Map, Value};

use super::json::write_object;
use crate::error::{Error, Result};
use crate::learning::{Bindings, DataMode, LearningParts, LearningSystem, Pair};
use crate::relation::{Atom, FiniteSet, Relation};
use crate::strata::{ComponentInventory, ComponentKey};

pub const FORMAT_VERSION: u32 = 1;

/// Keys of a `learning_system` block naming relations.
const RELATION_KEYS: [&str; 4] = ["A", "G", "E", "H"];
/// Keys of a `learning_system` block naming sets.
const SET_KEYS: [&str; 5] = ["D", "Theta", "X", "Y", "V"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LearningBlock {
    /// Component key to the name of the bound set or relation.
    pub components: BTreeMap<String, String>,
    pub mode: Option<DataMode>,
    pub datasets: Option<Bindings>,
}

/// Optional inputs for analyses and learners.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Declarations {
    pub hardness: Option<String>,
    /// Relation over `Θ × Θ` used by flexibility.
    pub neighbors: Option<String>,
    /// Relation over `Y × Y × V` used by ERM.
    pub loss: Option<String>,
    /// Relation over `X × X × V` used by 1-NN.
    pub distance: Option<String>,
    /// `identity`, `argmin`, `perceptron` or a relation over `D × Θ × Θ`.
    pub step: Option<String>,
    pub sample: Option<Vec<Atom>>,
    pub partition: Option<Vec<Vec<Atom>>>,
    pub chain: Option<Vec<Atom>>,
    pub eval: Option<Vec<Pair>>,
    pub dataset: Option<Atom>,
    pub theta: Option<Atom>,
    pub theta0: Option<Atom>,
    pub weight_bound: Option<i64>,
}

pub const STEP_BUILTINS: [&str; 3] = ["argmin", "identity", "perceptron"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemDocument {
    pub format_version: u32,
    pub sets: BTreeMap<String, FiniteSet>,
    pub relations: BTreeMap<String, Relation>,
    pub learning_system: Option<LearningBlock>,
    pub declarations: Declarations,
}

/// JSON value whose objects are checked for repeated keys while parsing.
struct Strict(Value);

impl<'de> Deserialize<'de> for Strict {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        d.deserialize_any(StrictVisitor).map(Strict)
    }
}

struct StrictVisitor;

impl<'de> Visitor<'de> for StrictVisitor {
    type Value = Value;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a JSON value")
    }

    fn visit_bool<E>(self, v: bool) -> std::result::Result<Value, E> {
        Ok(Value::Bool(v))
    }

    fn visit_i64<E>(self, v: i64) -> std::result::Result<Value, E> {
        Ok(Value::from(v))
    }

    fn visit_u64<E>(self, v: u64) -> std::result::Result<Value, E> {
        Ok(Value::from(v))
    }

    fn visit_f64<E>(self, v: f64) -> std::result::Result<Value, E> {
        Ok(Value::from(v))
    }

    fn visit_str<E>(self, v: &str) -> std::result::Result<Value, E> {
        Ok(Value::String(v.to_owned()))
    }

    fn visit_string<E>(self, v: String) -> std::result::Result<Value, E> {
        Ok(Value::String(v))
    }

    fn visit_unit<E>(self) -> std::result::Result<Value, E> {
        Ok(Value::Null)
    }

    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<Value, A::Error> {
        let mut items = Vec::new();
        while let Some(Strict(v)) = seq.next_element()? {
            items.push(v);
        }
        Ok(Value::Array(items))
    }

    fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> std::result::Result<Value, A::Error> {
        let mut out = Map::new();
        while let Some(k) = map.next_key::<String>()? {
            if out.contains_key(&k) {
                return Err(de::Error::custom(format!("duplicate key `{k}`")));
            }
            let Strict(v) = map.next_value()?;
            out.insert(k, v);
        }
        Ok(Value::Object(out))
    }
}

fn parse_error(e: serde_json::Error) -> Error {
    let msg = e.to_string();
    if let Some(rest) = msg.strip_prefix("duplicate key `") {
        if let Some(end) = rest.find('`') {
            return Error::DuplicateName {
                name: rest[..end].to_owned(),
                location: format!("line {}, column {}", e.line(), e.column()),
            };
        }
    }
    let message = msg.split(" at line ").next().unwrap_or(&msg).to_owned();
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message,
    }
}

fn invalid(location: &str, message: impl Into<String>) -> Error {
    Error::InvalidValue {
        location: location.to_owned(),
        message: message.into(),
    }
}

fn object<'a>(v: &'a Value, location: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| invalid(location, "expected an object"))
}

fn array<'a>(v: &'a Value, location: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| invalid(location, "expected an array"))
}

fn string<'a>(v: &'a Value, location: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| invalid(location, "expected a string"))
}

fn atom(v: &Value, location: &str) -> Result<Atom> {
    match v {
        Value::String(s) => Ok(Atom::Sym(s.clone())),
        Value::Number(n) => n
            .as_i64()
            .map(Atom::Int)
            .ok_or_else(|| invalid(location, format!("{n} is not a 64-bit integer"))),
        _ => Err(invalid(location, "expected an integer or a string")),
    }
}

fn atoms(v: &Value, location: &str) -> Result<Vec<Atom>> {
    array(v, location)?
        .iter()
        .enumerate()
        .map(|(i, a)| atom(a, &format!("{location}[{i}]")))
        .collect()
}

fn pair(v: &Value, location: &str) -> Result<Pair> {
    match atoms(v, location)?.as_slice() {
        [x, y] => Ok((x.clone(), y.clone())),
        other => Err(invalid(location, format!("expected an [x, y] pair, found {} items", other.len()))),
    }
}

fn pairs(v: &Value, location: &str) -> Result<Vec<Pair>> {
    array(v, location)?
        .iter()
        .enumerate()
        .map(|(i, p)| pair(p, &format!("{location}[{i}]")))
        .collect()
}

fn reject_unknown(map: &Map<String, Value>, known: &[&str], location: &str) -> Result<()> {
    match map.keys().find(|k| !known.contains(&k.as_str())) {
        Some(k) => Err(Error::UnresolvedName {
            name: k.clone(),
            location: location.to_owned(),
        }),
        None => Ok(()),
    }
}

fn datasets(v: &Value, location: &str) -> Result<Bindings> {
    let mut out = Bindings::new();
    for (i, entry) in array(v, location)?.iter().enumerate() {
        let loc = format!("{location}[{i}]");
        let obj = object(entry, &loc)?;
        reject_unknown(obj, &["id", "pairs"], &loc)?;
        let id = atom(field(obj, "id", &loc)?, &format!("{loc}.id"))?;
        let mut ps = pairs(field(obj, "pairs", &loc)?, &format!("{loc}.pairs"))?;
        ps.sort();
        if out.insert(id.clone(), ps).is_some() {
            return Err(Error::DuplicateName {
                name: id.to_string(),
                location: loc,
            });
        }
    }
    Ok(out)
}

fn field<'a>(obj: &'a Map<String, Value>, name: &str, location: &str) -> Result<&'a Value> {
    obj.get(name).ok_or_else(|| Error::MissingField {
        field: name.to_owned(),
        location: location.to_owned(),
    })
}

impl SystemDocument {
    pub fn parse(text: &str) -> Result<Self> {
        let Strict(root) = serde_json::from_str(text).map_err(parse_error)?;
        let root = object(&root, "document")?;
        reject_unknown(
            root,
            &["format_version", "sets", "relations", "learning_system", "declarations"],
            "document",
        )?;

        let version = field(root, "format_version", "document")?;
        let version = version
            .as_u64()
            .ok_or_else(|| invalid("format_version", "expected a non-negative integer"))?;
        if version != FORMAT_VERSION as u64 {
            return Err(Error::UnsupportedVersion(version.min(u32::MAX as u64) as u32));
        }

        let mut sets = BTreeMap::new();
        if let Some(v) = root.get("sets") {
            for (name, elems) in object(v, "sets")? {
                let loc = format!("sets.{name}");
                let set = FiniteSet::new(name.clone(), atoms(elems, &loc)?)?;
                sets.insert(name.clone(), set);
            }
        }

        let mut relations = BTreeMap::new();
        if let Some(v) = root.get("relations") {
            for (name, body) in object(v, "relations")? {
                let loc = format!("relations.{name}");
                if sets.contains_key(name) {
                    return Err(Error::DuplicateName {
                        name: name.clone(),
                        location: loc,
                    });
                }
                let body = object(body, &loc)?;
                reject_unknown(body, &["components", "tuples"], &loc)?;
                let comp_loc = format!("{loc}.components");
                let components = array(field(body, "components", &loc)?, &comp_loc)?
                    .iter()
                    .enumerate()
                    .map(|(i, c)| {
                        let cl = format!("{comp_loc}[{i}]");
                        let cname = string(c, &cl)?;
                        sets.get(cname).cloned().ok_or(Error::UnresolvedName {
                            name: cname.to_owned(),
                            location: cl,
                        })
                    })
                    .collect::<Result<Vec<FiniteSet>>>()?;
                let tup_loc = format!("{loc}.tuples");
                let tuples = array(field(body, "tuples", &loc)?, &tup_loc)?
                    .iter()
                    .enumerate()
                    .map(|(i, t)| atoms(t, &format!("{tup_loc}[{i}]")))
                    .collect::<Result<Vec<_>>>()?;
                relations.insert(name.clone(), Relation::new(name.clone(), components, tuples)?);
            }
        }

        let learning_system = match root.get("learning_system") {
            None => None,
            Some(v) => Some(parse_learning(v, &sets, &relations)?),
        };
        let declarations = match root.get("declarations") {
            None => Declarations::default(),
            Some(v) => parse_declarations(v, &relations)?,
        };
        Ok(SystemDocument {
            format_version: FORMAT_VERSION,
            sets,
            relations,
            learning_system,
            declarations,
        })
    }

    /// Canonical text: top-level keys in the fixed order `format_version,
    /// sets, relations, learning_system, declarations`, everything below
    /// sorted.
    pub fn to_canonical_string(&self) -> String {
        let sets: Map<String, Value> = self
            .sets
            .iter()
            .map(|(n, s)| (n.clone(), json!(s.elements())))
            .collect();
        let relations: Map<String, Value> = self
            .relations
            .iter()
            .map(|(n, r)| {
                (
                    n.clone(),
                    json!({
                        "components": r.component_names(),
                        "tuples": r.tuples().collect::<Vec<_>>(),
                    }),
                )
            })
            .collect();
        let version = json!(self.format_version);
        let sets = Value::Object(sets);
        let relations = Value::Object(relations);
        let learning = self.learning_system.as_ref().map(learning_json);
        let declarations = declarations_json(&self.declarations);
        let mut fields: Vec<(&str, &Value)> =
            vec![("format_version", &version), ("sets", &sets), ("relations", &relations)];
        if let Some(l) = &learning {
            fields.push(("learning_system", l));
        }
        fields.push(("declarations", &declarations));
        let mut out = String::new();
        write_object(&mut out, &fields, 0);
        out.push('\n');
        out
    }

    /// Document holding a learning system under its own component names.
    pub fn from_learning_system(ls: &LearningSystem) -> Self {
        let sets = [ls.data(), ls.params(), ls.values(), ls.x_set(), ls.y_set()]
            .into_iter()
            .map(|s| (s.name().to_owned(), s.clone()))
            .collect();
        let relations = [ls.algo(), ls.goal(), ls.seek(), ls.hyp()]
            .into_iter()
            .map(|r| (r.name().to_owned(), r.clone()))
            .collect();
        let components = [
            ("A", ls.algo().name()),
            ("G", ls.goal().name()),
            ("E", ls.seek().name()),
            ("H", ls.hyp().name()),
            ("D", ls.data().name()),
            ("Theta", ls.params().name()),
            ("X", ls.x_set().name()),
            ("Y", ls.y_set().name()),
            ("V", ls.values().name()),
        ]
        .into_iter()
        .map(|(k, n)| (k.to_owned(), n.to_owned()))
        .collect();
        SystemDocument {
            format_version: FORMAT_VERSION,
            sets,
            relations,
            learning_system: Some(LearningBlock {
                components,
                mode: Some(ls.mode()),
                datasets: Some(ls.bindings().clone()),
            }),
            declarations: Declarations::default(),
        }
    }

    /// Keys bound in the `learning_system` block.
    pub fn inventory(&self) -> ComponentInventory {
        self.learning_system
            .iter()
            .flat_map(|b| b.components.keys())
            .filter_map(|k| k.parse::<ComponentKey>().ok())
            .collect()
    }

    fn block(&self) -> Result<&LearningBlock> {
        self.learning_system.as_ref().ok_or_else(|| Error::MissingField {
            field: "learning_system".to_owned(),
            location: "document".to_owned(),
        })
    }

    fn bound_name(&self, key: &str) -> Result<&str> {
        self.block()?
            .components
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| Error::MissingField {
                field: key.to_owned(),
                location: "learning_system".to_owned(),
            })
    }

    /// The set bound to `D`, `Theta`, `X`, `Y` or `V`.
    pub fn bound_set(&self, key: &str) -> Result<&FiniteSet> {
        if key == "V" && !self.block()?.components.contains_key("V") {
            return self.bound_relation("G")?.components().get(2).ok_or_else(|| Error::MissingField {
                field: "V".to_owned(),
                location: "learning_system".to_owned(),
            });
        }
        Ok(&self.sets[self.bound_name(key)?])
    }

    /// The relation bound to `A`, `G`, `E` or `H`.
    pub fn bound_relation(&self, key: &str) -> Result<&Relation> {
        Ok(&self.relations[self.bound_name(key)?])
    }

    pub fn datasets(&self) -> Result<&Bindings> {
        self.block()?.datasets.as_ref().ok_or_else(|| Error::MissingField {
            field: "datasets".to_owned(),
            location: "learning_system".to_owned(),
        })
    }

    /// Assembles the full learning system; `mode` overrides the document's.
    pub fn learning_system(&self, mode: Option<DataMode>) -> Result<LearningSystem> {
        let block = self.block()?;
        LearningSystem::new(LearningParts {
            x_set: self.bound_set("X")?.clone(),
            y_set: self.bound_set("Y")?.clone(),
            data: self.bound_set("D")?.clone(),
            mode: mode.or(block.mode).unwrap_or(DataMode::Batch),
            bindings: self.datasets()?.clone(),
            params: self.bound_set("Theta")?.clone(),
            values: self.bound_set("V")?.clone(),
            algo: self.bound_relation("A")?.clone(),
            goal: self.bound_relation("G")?.clone(),
            seek: self.bound_relation("E")?.clone(),
            hyp: self.bound_relation("H")?.clone(),
        })
    }

    pub fn relation(&self, name: &str, location: &str) -> Result<&Relation> {
        self.relations.get(name).ok_or_else(|| Error::UnresolvedName {
            name: name.to_owned(),
            location: location.to_owned(),
        })
    }
}

fn parse_learning(
    v: &Value,
    sets: &BTreeMap<String, FiniteSet>,
    relations: &BTreeMap<String, Relation>,
) -> Result<LearningBlock> {
    let loc = "learning_system";
    let obj = object(v, loc)?;
    let mut known: Vec<&str> = vec!["mode", "datasets"];
    known.extend(RELATION_KEYS);
    known.extend(SET_KEYS);
    reject_unknown(obj, &known, loc)?;
    let mut components = BTreeMap::new();
    for (keys, is_relation) in [(&RELATION_KEYS[..], true), (&SET_KEYS[..], false)] {
        for &k in keys {
            let Some(v) = obj.get(k) else { continue };
            let kl = format!("{loc}.{k}");
            let name = string(v, &kl)?;
            let resolves = if is_relation {
                relations.contains_key(name)
            } else {
                sets.contains_key(name)
            };
            if !resolves {
                return Err(Error::UnresolvedName {
                    name: name.to_owned(),
                    location: kl,
                });
            }
            components.insert(k.to_owned(), name.to_owned());
        }
    }
    let mode = match obj.get("mode") {
        None => None,
        Some(m) => Some(string(m, "learning_system.mode")?.parse().map_err(|e: String| invalid("learning_system.mode", e))?),
    };
    let datasets = match obj.get("datasets") {
        None => None,
        Some(d) => Some(datasets(d, "learning_system.datasets")?),
    };
    Ok(LearningBlock {
        components,
        mode,
        datasets,
    })
}

fn parse_declarations(v: &Value, relations: &BTreeMap<String, Relation>) -> Result<Declarations> {
    let loc = "declarations";
    let obj = object(v, loc)?;
    reject_unknown(
        obj,
        &[
            "hardness", "neighbors", "loss", "distance", "step", "sample", "partition", "chain", "eval", "dataset",
            "theta", "theta0", "weight_bound",
        ],
        loc,
    )?;
    let at = |k: &str| format!("{loc}.{k}");
    let text = |k: &str| -> Result<Option<String>> { obj.get(k).map(|v| string(v, &at(k)).map(str::to_owned)).transpose() };
    let relation_ref = |k: &str| -> Result<Option<String>> {
        let name = text(k)?;
        if let Some(n) = &name {
            let builtin = k == "step" && STEP_BUILTINS.contains(&n.as_str());
            if !builtin && !relations.contains_key(n) {
                return Err(Error::UnresolvedName {
                    name: n.clone(),
                    location: at(k),
                });
            }
        }
        Ok(name)
    };
    let one = |k: &str| obj.get(k).map(|v| atom(v, &at(k))).transpose();
    Ok(Declarations {
        hardness: text("hardness")?,
        neighbors: relation_ref("neighbors")?,
        loss: relation_ref("loss")?,
        distance: relation_ref("distance")?,
        step: relation_ref("step")?,
        sample: obj.get("sample").map(|v| atoms(v, &at("sample"))).transpose()?,
        partition: obj
            .get("partition")
            .map(|v| {
                array(v, &at("partition"))?
                    .iter()
                    .enumerate()
                    .map(|(i, c)| atoms(c, &format!("{}[{i}]", at("partition"))))
                    .collect::<Result<Vec<_>>>()
            })
            .transpose()?,
        chain: obj.get("chain").map(|v| atoms(v, &at("chain"))).transpose()?,
        eval: obj.get("eval").map(|v| pairs(v, &at("eval"))).transpose()?,
        dataset: one("dataset")?,
        theta: one("theta")?,
        theta0: one("theta0")?,
        weight_bound: obj
            .get("weight_bound")
            .map(|v| v.as_i64().ok_or_else(|| invalid(&at("weight_bound"), "expected an integer")))
            .transpose()?,
    })
}

fn pairs_json(ps: &[Pair]) -> Value {
    Value::Array(ps.iter().map(|(x, y)| json!([x, y])).collect())
}

fn datasets_json(b: &Bindings) -> Value {
    Value::Array(
        b.iter()
            .map(|(id, ps)| json!({"id": id, "pairs": pairs_json(ps)}))
            .collect(),
    )
}

fn learning_json(b: &LearningBlock) -> Value {
    let mut m: Map<String, Value> = b.components.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
    if let Some(mode) = b.mode {
        m.insert("mode".into(), json!(mode));
    }
    if let Some(d) = &b.datasets {
        m.insert("datasets".into(), datasets_json(d));
    }
    Value::Object(m)
}

fn declarations_json(d: &Declarations) -> Value {
    let mut m = Map::new();
    let mut put = |k: &str, v: Option<Value>| {
        if let Some(v) = v {
            m.insert(k.to_owned(), v);
        }
    };
    put("hardness", d.hardness.as_ref().map(|v| json!(v)));
    put("neighbors", d.neighbors.as_ref().map(|v| json!(v)));
    put("loss", d.loss.as_ref().map(|v| json!(v)));
    put("distance", d.distance.as_ref().map(|v| json!(v)));
    put("step", d.step.as_ref().map(|v| json!(v)));
    put("sample", d.sample.as_ref().map(|v| json!(v)));
    put("partition", d.partition.as_ref().map(|v| json!(v)));
    put("chain", d.chain.as_ref().map(|v| json!(v)));
    put("eval", d.eval.as_ref().map(|v| pairs_json(v)));
    put("dataset", d.dataset.as_ref().map(|v| json!(v)));
    put("theta", d.theta.as_ref().map(|v| json!(v)));
    put("theta0", d.theta0.as_ref().map(|v| json!(v)));
    put("weight_bound", d.weight_bound.map(|v| json!(v)));
    Value::Object(m)
}
