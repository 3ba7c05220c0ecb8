//! JSON file formats.
//!
//! * group: `{"order": n, "table": [[...]], "p_hint": p}` (`p_hint` optional)
//! * triality: a group file plus `"rho": [...]`, `"sigma": [...]`
//! * loop: `{"order": n, "table": [[...]]}`
//! * descriptor: `{"construction": "abelian_doubling" | "group_doubling", "base": {...}}`
//!   or `{"construction": "example_4", "p": 5, "sigma_sign": 1}`, for inputs
//!   too large to list as tables.
//!
//! Indices are 0-based and 0 is the identity. Canonical output is compact
//! JSON with a trailing newline.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::groups::{Elem, FiniteGroup, GroupMap};
use crate::moufang::Loop;
use crate::report::Report;
use crate::triality::{abelian_doubling, group_doubling, verify_triality, TrialityGroup};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupFile {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_hint: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrialityFile {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_hint: Option<u32>,
    pub rho: Vec<usize>,
    pub sigma: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoopFile {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
}

/// A group named by its construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpec {
    Trivial,
    Cyclic { n: usize },
    ElementaryAbelian { p: usize, k: u32 },
    Heisenberg { p: usize },
    Modular { p: usize },
    DirectProduct { factors: Vec<GroupSpec> },
    Table { order: usize, table: Vec<Vec<usize>> },
}

impl GroupSpec {
    pub fn build(&self) -> Result<FiniteGroup> {
        match self {
            GroupSpec::Trivial => Ok(FiniteGroup::trivial()),
            GroupSpec::Cyclic { n } => FiniteGroup::cyclic(*n),
            GroupSpec::ElementaryAbelian { p, k } => FiniteGroup::elementary_abelian(*p, *k),
            GroupSpec::Heisenberg { p } => FiniteGroup::heisenberg(*p),
            GroupSpec::Modular { p } => FiniteGroup::modular(*p),
            GroupSpec::DirectProduct { factors } => {
                let mut acc = FiniteGroup::trivial();
                for f in factors {
                    acc = FiniteGroup::direct_product(&acc, &f.build()?)?;
                }
                Ok(acc)
            }
            GroupSpec::Table { order, table } => group_from_table(*order, table.clone()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "construction", rename_all = "snake_case", deny_unknown_fields)]
pub enum Descriptor {
    AbelianDoubling {
        base: GroupSpec,
    },
    GroupDoubling {
        base: GroupSpec,
    },
    /// The three-dimensional nilpotent Lie algebra with a candidate triality.
    #[serde(rename = "example_4")]
    Example4 {
        p: u32,
        sigma_sign: i64,
    },
}

/// A triality input whose maps have not been certified.
#[derive(Clone, Debug)]
pub struct RawTriality {
    pub group: FiniteGroup,
    pub rho: GroupMap,
    pub sigma: GroupMap,
    pub p_hint: Option<u32>,
}

impl RawTriality {
    pub fn verify(&self) -> Report {
        verify_triality(&self.group, &self.rho, &self.sigma)
    }

    pub fn certify(self) -> Result<TrialityGroup> {
        TrialityGroup::new(self.group, self.rho, self.sigma)
    }
}

/// Anything the command line accepts as a triality input.
#[derive(Clone, Debug)]
pub enum Input {
    Raw(RawTriality),
    Certified(TrialityGroup),
    Example { p: u32, sigma_sign: i64 },
}

fn group_from_table(order: usize, table: Vec<Vec<usize>>) -> Result<FiniteGroup> {
    if table.len() != order {
        return Err(Error::Format(format!(
            "order is {order} but the table has {} rows",
            table.len()
        )));
    }
    FiniteGroup::from_table(table)
}

fn map_of(g: &FiniteGroup, images: &[usize]) -> Result<GroupMap> {
    GroupMap::new(g, images.iter().map(|&x| x as Elem).collect())
}

impl Descriptor {
    pub fn build(&self) -> Result<Input> {
        match self {
            Descriptor::AbelianDoubling { base } => Ok(Input::Certified(abelian_doubling(&base.build()?)?)),
            Descriptor::GroupDoubling { base } => Ok(Input::Certified(group_doubling(&base.build()?)?)),
            Descriptor::Example4 { p, sigma_sign } => Ok(Input::Example {
                p: *p,
                sigma_sign: *sigma_sign,
            }),
        }
    }
}

pub fn parse_input(text: &str) -> Result<Input> {
    let v: Value = serde_json::from_str(text)?;
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Format("expected a JSON object".into()))?;
    if obj.contains_key("construction") {
        let d: Descriptor = serde_json::from_value(v)?;
        return d.build();
    }
    if obj.contains_key("rho") || obj.contains_key("sigma") {
        let f: TrialityFile = serde_json::from_value(v)?;
        let group = group_from_table(f.order, f.table)?;
        let rho = map_of(&group, &f.rho)?;
        let sigma = map_of(&group, &f.sigma)?;
        return Ok(Input::Raw(RawTriality {
            group,
            rho,
            sigma,
            p_hint: f.p_hint,
        }));
    }
    Err(Error::Format(
        "not a triality input: expected \"rho\"/\"sigma\" or \"construction\"".into(),
    ))
}

pub fn read_input(path: &Path) -> Result<Input> {
    parse_input(&std::fs::read_to_string(path)?)
}

pub fn parse_group(text: &str) -> Result<(FiniteGroup, Option<u32>)> {
    let f: GroupFile = serde_json::from_str(text)?;
    Ok((group_from_table(f.order, f.table)?, f.p_hint))
}

pub fn parse_loop(text: &str) -> Result<Loop> {
    let f: LoopFile = serde_json::from_str(text)?;
    if f.table.len() != f.order {
        return Err(Error::Format(format!(
            "order is {} but the table has {} rows",
            f.order,
            f.table.len()
        )));
    }
    Loop::from_table(f.table)
}

pub fn group_file(g: &FiniteGroup, p_hint: Option<u32>) -> Result<GroupFile> {
    if !g.has_table() {
        return Err(Error::Format(format!(
            "{} has no explicit table; describe it by construction",
            g.label()
        )));
    }
    Ok(GroupFile {
        order: g.order(),
        table: g.table(),
        p_hint,
    })
}

pub fn triality_file(t: &TrialityGroup, p_hint: Option<u32>) -> Result<TrialityFile> {
    let g = group_file(t.group(), p_hint)?;
    let imgs = |m: &GroupMap| m.images().iter().map(|&x| x as usize).collect();
    Ok(TrialityFile {
        order: g.order,
        table: g.table,
        p_hint,
        rho: imgs(t.rho()),
        sigma: imgs(t.sigma()),
    })
}

pub fn loop_file(l: &Loop) -> LoopFile {
    LoopFile {
        order: l.order(),
        table: l.table(),
    }
}

/// Compact JSON plus newline.
pub fn to_canonical<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string(value)?;
    s.push('\n');
    Ok(s)
}

/// Re-serializes a triality, group, loop or descriptor file in canonical form.
pub fn canonicalize(text: &str) -> Result<String> {
    let v: Value = serde_json::from_str(text)?;
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Format("expected a JSON object".into()))?;
    if obj.contains_key("construction") {
        to_canonical(&serde_json::from_value::<Descriptor>(v)?)
    } else if obj.contains_key("rho") {
        to_canonical(&serde_json::from_value::<TrialityFile>(v)?)
    } else if obj.contains_key("p_hint") {
        to_canonical(&serde_json::from_value::<GroupFile>(v)?)
    } else {
        // group and loop files share a shape without p_hint
        to_canonical(&serde_json::from_value::<LoopFile>(v)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triality_file_round_trip() {
        let t = abelian_doubling(&FiniteGroup::cyclic(5).unwrap()).unwrap();
        let f = triality_file(&t, Some(5)).unwrap();
        let text = to_canonical(&f).unwrap();
        assert_eq!(canonicalize(&text).unwrap(), text);
        match parse_input(&text).unwrap() {
            Input::Raw(r) => assert!(r.verify().all_passed()),
            _ => panic!("expected a raw triality"),
        }
    }

    #[test]
    fn descriptor_round_trip() {
        let d = Descriptor::GroupDoubling {
            base: GroupSpec::Heisenberg { p: 5 },
        };
        let text = to_canonical(&d).unwrap();
        assert_eq!(
            text,
            "{\"construction\":\"group_doubling\",\"base\":{\"family\":\"heisenberg\",\"p\":5}}\n"
        );
        assert_eq!(canonicalize(&text).unwrap(), text);
        let e = to_canonical(&Descriptor::Example4 { p: 5, sigma_sign: -1 }).unwrap();
        assert!(e.contains("\"example_4\""));
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(parse_input("{\"order\": 1"), Err(Error::Json(_))));
        assert!(matches!(parse_input("[1,2]"), Err(Error::Format(_))));
        let bad = "{\"order\":2,\"table\":[[0,1],[1,0]],\"rho\":[0,0],\"sigma\":[0,1]}";
        assert!(parse_input(bad).is_err());
    }
}
