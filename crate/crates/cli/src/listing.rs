//! Flat listings for `charpow enumerate`.

use std::sync::Arc;

use charpow_core::class_function::format_rational;
use charpow_core::group::{enumerate_hom_classes, wreath_class_to_decorated, FiniteGroup};
use charpow_core::lattice::IntMatrix;
use charpow_core::torsion::{enumerate_subgroups, enumerate_sums, TorsionSubgroup};
use charpow_core::Result;
use serde_json::{json, Value};

/// A listing: a header with the count, then one record per item. `columns`
/// and `rows` are the CSV view, `items` the JSON one.
pub struct Listing {
    pub kind: &'static str,
    pub params: Vec<(&'static str, Value)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub items: Vec<Value>,
}

impl Listing {
    pub fn to_json(&self) -> Value {
        let mut header = serde_json::Map::new();
        header.insert("kind".into(), json!(self.kind));
        header.insert("count".into(), json!(self.items.len()));
        for (k, v) in &self.params {
            header.insert((*k).into(), v.clone());
        }
        json!({ "header": header, "items": self.items })
    }

    pub fn write_csv<W: std::io::Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::WriterBuilder::new().flexible(true).from_writer(out);
        let mut header = vec!["kind".to_string(), self.kind.to_string(), "count".into(), self.items.len().to_string()];
        for (k, v) in &self.params {
            header.push((*k).to_string());
            header.push(match v {
                Value::String(s) => s.clone(),
                v => v.to_string(),
            });
        }
        w.write_record(&header)?;
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn matrix_rows(m: &IntMatrix) -> Vec<Vec<i64>> {
    let flat = m.to_i64().expect("desk-scale matrices fit in i64");
    flat.chunks(m.cols().max(1)).map(<[i64]>::to_vec).collect()
}

fn matrix_text(m: &IntMatrix) -> String {
    matrix_rows(m)
        .iter()
        .map(|r| r.iter().map(i64::to_string).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join(";")
}

fn subgroup_json(h: &TorsionSubgroup) -> Value {
    let gens: Vec<Vec<String>> = h.generators().iter().map(|g| g.iter().map(format_rational).collect()).collect();
    json!({
        "order": h.order(),
        "annihilator": matrix_rows(h.annihilator_lattice().basis()),
        "generators": gens,
    })
}

fn perm_text(perm: &[u16]) -> String {
    perm.iter().map(u16::to_string).collect::<Vec<_>>().join(" ")
}

pub fn subgroups(p: u64, n: usize, k: u32) -> Listing {
    let subs = enumerate_subgroups(p, n, k);
    Listing {
        kind: "subgroups",
        params: vec![("p", json!(p)), ("n", json!(n)), ("k", json!(k))],
        columns: vec!["index", "order", "annihilator"],
        rows: subs
            .iter()
            .enumerate()
            .map(|(i, h)| vec![i.to_string(), h.order().to_string(), matrix_text(h.annihilator_lattice().basis())])
            .collect(),
        items: subs.iter().map(subgroup_json).collect(),
    }
}

pub fn sums(p: u64, n: usize, m: u64) -> Listing {
    let sums = enumerate_sums(p, n, m);
    Listing {
        kind: "sums",
        params: vec![("p", json!(p)), ("n", json!(n)), ("m", json!(m))],
        columns: vec!["index", "summands", "orders", "annihilators"],
        rows: sums
            .iter()
            .enumerate()
            .map(|(i, s)| {
                vec![
                    i.to_string(),
                    s.len().to_string(),
                    s.summands().iter().map(|h| h.order().to_string()).collect::<Vec<_>>().join(" "),
                    s.summands()
                        .iter()
                        .map(|h| matrix_text(h.annihilator_lattice().basis()))
                        .collect::<Vec<_>>()
                        .join(" | "),
                ]
            })
            .collect(),
        items: sums
            .iter()
            .map(|s| json!({ "summands": s.summands().iter().map(subgroup_json).collect::<Vec<_>>() }))
            .collect(),
    }
}

pub fn hom_classes(group: &Arc<FiniteGroup>, n: usize, p: u64) -> Result<Listing> {
    let classes = enumerate_hom_classes(group, n, p)?;
    let mut rows = Vec::new();
    let mut items = Vec::new();
    for (i, rep) in classes.reps().iter().enumerate() {
        let perms: Vec<&[u16]> = rep.iter().map(|&g| group.perm(g)).collect();
        let orders: Vec<u32> = rep.iter().map(|&g| group.element_order(g)).collect();
        rows.push(vec![
            i.to_string(),
            perms.iter().map(|p| perm_text(p)).collect::<Vec<_>>().join(" | "),
            orders.iter().map(u32::to_string).collect::<Vec<_>>().join(" "),
        ]);
        items.push(json!({ "rep": perms, "orders": orders }));
    }
    Ok(Listing {
        kind: "hom-classes",
        params: vec![("group", json!(group.name())), ("p", json!(p)), ("n", json!(n))],
        columns: vec!["index", "rep", "orders"],
        rows,
        items,
    })
}

pub fn wreath_classes(base: &Arc<FiniteGroup>, m: usize, n: usize, p: u64) -> Result<Listing> {
    let base_classes = enumerate_hom_classes(base, n, p)?;
    let group = FiniteGroup::wreath(base, m)?;
    let classes = enumerate_hom_classes(&group, n, p)?;
    let mut rows = Vec::new();
    let mut items = Vec::new();
    for (i, rep) in classes.reps().iter().enumerate() {
        let perms: Vec<&[u16]> = rep.iter().map(|&g| group.perm(g)).collect();
        let decorated = wreath_class_to_decorated(&classes, i, &base_classes)?;
        let summands: Vec<Value> = decorated
            .summands()
            .iter()
            .map(|(h, a)| json!({ "subgroup": subgroup_json(h), "base_class": a }))
            .collect();
        rows.push(vec![
            i.to_string(),
            perms.iter().map(|p| perm_text(p)).collect::<Vec<_>>().join(" | "),
            decorated
                .summands()
                .iter()
                .map(|(h, a)| format!("{}:{a}", h.order()))
                .collect::<Vec<_>>()
                .join(" "),
        ]);
        items.push(json!({ "rep": perms, "decorated": summands }));
    }
    Ok(Listing {
        kind: "wreath-classes",
        params: vec![
            ("group", json!(group.name())),
            ("base", json!(base.name())),
            ("m", json!(m)),
            ("p", json!(p)),
            ("n", json!(n)),
        ],
        columns: vec!["index", "rep", "decorated"],
        rows,
        items,
    })
}
