//! Canonical JSON form of class functions.
//!
//! ```json
//! {
//!   "classes": [{"rep": [[0, 1, 2], [1, 0, 2]], "values": ["0/1", "1/1", ...]}, ...],
//!   "format": "charpow.class-function/1",
//!   "group": "S3",
//!   "level": 2,
//!   "n": 2,
//!   "p": 2
//! }
//! ```
//!
//! Every class is listed, in canonical order, with its representative tuple
//! given as permutation images and its `C_0` table in the order of
//! [`C0Level::matrix_at`]. Rationals are `"numerator/denominator"` strings.

use std::sync::Arc;

use serde_json::{json, Value};

use crate::class_function::{format_rational, parse_rational, C0Element, C0Level, ClassFunction};
use crate::error::{Error, Result};
use crate::group::{enumerate_hom_classes, FiniteGroup, HomClasses};

pub const FORMAT: &str = "charpow.class-function/1";

pub fn to_json(f: &ClassFunction) -> Value {
    let classes = f.classes();
    let group = classes.group();
    let level = f.level();
    let entries: Vec<Value> = (0..classes.len())
        .map(|c| {
            let rep: Vec<Vec<u16>> = classes.rep(c).iter().map(|&g| group.perm(g).to_vec()).collect();
            let values: Vec<String> = f.get(c).values().iter().map(format_rational).collect();
            json!({ "rep": rep, "values": values })
        })
        .collect();
    json!({
        "format": FORMAT,
        "group": group.name(),
        "p": level.p,
        "n": level.n,
        "level": level.level,
        "classes": entries,
    })
}

/// The JSON text with one line per class.
pub fn to_string(f: &ClassFunction) -> String {
    let v = to_json(f);
    let obj = v.as_object().expect("to_json builds an object");
    let mut out = String::from("{\n");
    for (i, (key, value)) in obj.iter().enumerate() {
        out.push_str(&format!("  {}: ", Value::String(key.clone())));
        match value.as_array() {
            Some(entries) if key == "classes" => {
                out.push_str("[\n");
                for (j, e) in entries.iter().enumerate() {
                    out.push_str("    ");
                    out.push_str(&e.to_string());
                    out.push_str(if j + 1 < entries.len() { ",\n" } else { "\n" });
                }
                out.push_str("  ]");
            }
            _ => out.push_str(&value.to_string()),
        }
        out.push_str(if i + 1 < obj.len() { ",\n" } else { "\n" });
    }
    out.push_str("}\n");
    out
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Parse(format!("missing field {key:?}")))
}

fn uint(v: &Value, key: &str) -> Result<u64> {
    field(v, key)?
        .as_u64()
        .ok_or_else(|| Error::Parse(format!("field {key:?} is not a nonnegative integer")))
}

/// Parses a class function, rebuilding its group from the `group` spec.
pub fn from_json(v: &Value) -> Result<ClassFunction> {
    if field(v, "format")?.as_str() != Some(FORMAT) {
        return Err(Error::Parse(format!("expected format {FORMAT:?}")));
    }
    let spec = field(v, "group")?.as_str().ok_or_else(|| Error::Parse("group is not a string".into()))?;
    let group = FiniteGroup::parse(spec)?;
    let (p, n, level) = (uint(v, "p")?, uint(v, "n")? as usize, uint(v, "level")? as u32);
    if p < 2 || n == 0 {
        return Err(Error::Parse(format!("invalid parameters p={p} n={n}")));
    }
    let classes = Arc::new(enumerate_hom_classes(&group, n, p)?);
    from_json_on(v, classes, C0Level::new(p, n, level))
}

/// Parses the class entries of `v` against known classes and level.
pub fn from_json_on(v: &Value, classes: Arc<HomClasses>, level: C0Level) -> Result<ClassFunction> {
    let group = classes.group().clone();
    let entries = field(v, "classes")?
        .as_array()
        .ok_or_else(|| Error::Parse("classes is not an array".into()))?;
    let mut f = ClassFunction::zero(classes.clone(), level)?;
    let mut seen = vec![false; classes.len()];
    for entry in entries {
        let tuple = field(entry, "rep")?
            .as_array()
            .ok_or_else(|| Error::Parse("rep is not an array".into()))?
            .iter()
            .map(|perm| {
                let perm: Vec<u16> = perm
                    .as_array()
                    .ok_or_else(|| Error::Parse("permutation is not an array".into()))?
                    .iter()
                    .map(|x| x.as_u64().and_then(|x| u16::try_from(x).ok()))
                    .collect::<Option<_>>()
                    .ok_or_else(|| Error::Parse("bad permutation entry".into()))?;
                group
                    .element_of_perm(&perm)
                    .ok_or_else(|| Error::Parse(format!("{perm:?} is not an element of {}", group.name())))
            })
            .collect::<Result<Vec<u32>>>()?;
        if tuple.len() != classes.n() {
            return Err(Error::Parse(format!("tuple of length {} for n = {}", tuple.len(), classes.n())));
        }
        let class = classes.class_of(&tuple).map_err(|_| Error::Parse(format!("{tuple:?} is not a commuting p-power tuple")))?;
        if std::mem::replace(&mut seen[class], true) {
            return Err(Error::Parse(format!("class {class} listed twice")));
        }
        let values = field(entry, "values")?
            .as_array()
            .ok_or_else(|| Error::Parse("values is not an array".into()))?
            .iter()
            .map(|x| x.as_str().ok_or_else(|| Error::Parse("value is not a string".into())).and_then(parse_rational))
            .collect::<Result<Vec<_>>>()?;
        f.set(class, C0Element::new(level, values)?)?;
    }
    Ok(f)
}

pub fn from_str(s: &str) -> Result<ClassFunction> {
    let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    from_json(&v)
}
