//! Random property graphs and random MATCH queries over them.

use rand::seq::IndexedRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use strata::query::Params;
use strata::store::{GraphStore, PropertyValue};

pub const NAMES: [&str; 6] = ["ada", "bob", "cy", "dee", "eve", "fay"];

/// People, companies and cities with a few parallel edges and self-loops.
/// `uid` is unique over Person; `name` is indexed on Person and Company.
pub fn property_graph(
    rng: &mut ChaCha8Rng,
    people: usize,
    others: usize,
    edges: usize,
) -> GraphStore {
    let mut g = GraphStore::new();
    g.create_index("Person", &["uid"], true).unwrap();
    g.create_index("Person", &["name"], false).unwrap();
    g.create_index("Company", &["name"], false).unwrap();
    let mut persons = Vec::new();
    for uid in 0..people {
        let mut props: Vec<(String, PropertyValue)> = vec![
            ("uid".into(), PropertyValue::Int(uid as i64)),
            (
                "name".into(),
                PropertyValue::String(NAMES.choose(rng).unwrap().to_string()),
            ),
        ];
        if rng.random_bool(0.8) {
            props.push(("age".into(), PropertyValue::Int(rng.random_range(18..60))));
        }
        if rng.random_bool(0.6) {
            props.push((
                "w".into(),
                PropertyValue::Float(rng.random_range(0..8) as f64 * 0.25),
            ));
        }
        let labels: &[&str] = if rng.random_bool(0.2) {
            &["Person", "Admin"]
        } else {
            &["Person"]
        };
        persons.push(g.create_node(labels, props).unwrap());
    }
    let mut companies = Vec::new();
    let mut cities = Vec::new();
    for i in 0..others {
        let name = PropertyValue::String(NAMES.choose(rng).unwrap().to_string());
        if i % 2 == 0 {
            let size = PropertyValue::Int(rng.random_range(1..5) * 10);
            companies.push(
                g.create_node(&["Company"], [("name", name), ("size", size)])
                    .unwrap(),
            );
        } else {
            cities.push(g.create_node(&["City"], [("name", name)]).unwrap());
        }
    }
    for _ in 0..edges {
        let a = *persons.choose(rng).unwrap();
        match rng.random_range(0..4) {
            0 | 1 => {
                let b = *persons.choose(rng).unwrap();
                let since = PropertyValue::Int(rng.random_range(2000..2010));
                g.create_edge(a, b, "KNOWS", [("since", since)]).unwrap();
            }
            2 if !companies.is_empty() => {
                g.create_edge(
                    a,
                    *companies.choose(rng).unwrap(),
                    "WORKS_AT",
                    Vec::<(String, PropertyValue)>::new(),
                )
                .unwrap();
            }
            _ if !cities.is_empty() => {
                g.create_edge(
                    a,
                    *cities.choose(rng).unwrap(),
                    "LIVES_IN",
                    Vec::<(String, PropertyValue)>::new(),
                )
                .unwrap();
            }
            _ => {}
        }
    }
    g
}

#[derive(Clone, Copy, PartialEq)]
enum Kind {
    Int,
    Float,
    Str,
}

fn keys_of(label: Option<&str>) -> &'static [(&'static str, Kind)] {
    match label {
        Some("Person") | Some("Admin") => &[
            ("uid", Kind::Int),
            ("name", Kind::Str),
            ("age", Kind::Int),
            ("w", Kind::Float),
        ],
        Some("Company") => &[("name", Kind::Str), ("size", Kind::Int)],
        Some("City") => &[("name", Kind::Str)],
        _ => &[
            ("name", Kind::Str),
            ("age", Kind::Int),
            ("uid", Kind::Int),
            ("size", Kind::Int),
        ],
    }
}

fn literal(rng: &mut ChaCha8Rng, key: &str, kind: Kind) -> PropertyValue {
    match kind {
        Kind::Str => PropertyValue::String(NAMES.choose(rng).unwrap().to_string()),
        Kind::Float => PropertyValue::Float(rng.random_range(0..8) as f64 * 0.25),
        Kind::Int => PropertyValue::Int(match key {
            "uid" => rng.random_range(0..20),
            "age" => rng.random_range(18..60),
            "size" => rng.random_range(1..5) * 10,
            _ => rng.random_range(2000..2010),
        }),
    }
}

fn render(v: &PropertyValue) -> String {
    match v {
        PropertyValue::String(s) => format!("'{s}'"),
        PropertyValue::Int(i) => i.to_string(),
        PropertyValue::Float(f) => format!("{f:?}"),
        other => panic!("unexpected literal {other:?}"),
    }
}

pub struct GeneratedQuery {
    pub text: String,
    pub params: Params,
    /// Every returned column is an ORDER BY key, so row order is determined.
    pub ordered: bool,
}

/// Edge shapes the generated graphs contain, seen from `from`.
fn hops_from(from: &'static str) -> &'static [(&'static str, &'static str, &'static str)] {
    match from {
        "Person" => &[
            ("->", "KNOWS", "Person"),
            ("<-", "KNOWS", "Person"),
            ("--", "KNOWS", "Person"),
            ("->", "WORKS_AT", "Company"),
            ("->", "LIVES_IN", "City"),
            ("--", "WORKS_AT", "Company"),
        ],
        "Company" => &[("<-", "WORKS_AT", "Person"), ("--", "WORKS_AT", "Person")],
        _ => &[("<-", "LIVES_IN", "Person"), ("--", "LIVES_IN", "Person")],
    }
}

const TYPES: [&str; 5] = ["Person", "Person", "Person", "Company", "City"];

/// A random MATCH query: up to three patterns of up to two hops, optional
/// inline maps, WHERE conjuncts, parameters, aggregates and ORDER BY/LIMIT.
/// Patterns mostly follow the graph schema; a few deliberately do not.
pub fn random_query(rng: &mut ChaCha8Rng) -> GeneratedQuery {
    let mut vars: Vec<(String, &'static str)> = Vec::new();
    let mut edge_vars: Vec<String> = Vec::new();
    let mut params = Params::new();
    let mut patterns = Vec::new();
    let value = |rng: &mut ChaCha8Rng, params: &mut Params, key: &str, kind: Kind| -> String {
        let v = literal(rng, key, kind);
        if rng.random_bool(0.25) {
            let name = format!("p{}", params.len());
            params.insert(name.clone(), v);
            format!("${name}")
        } else {
            render(&v)
        }
    };
    let node_text =
        |rng: &mut ChaCha8Rng, params: &mut Params, var: &str, ty: &'static str| -> String {
            let label = match (ty, rng.random_range(0..20)) {
                (_, 0..=7) => None,
                ("Person", 8..=10) => Some("Admin"),
                (t, _) => Some(t),
            };
            let mut text = format!("({var}");
            if let Some(l) = label {
                text.push(':');
                text.push_str(l);
            }
            if rng.random_bool(0.15) {
                let (k, kind) = *keys_of(Some(ty)).choose(rng).unwrap();
                let v = value(rng, params, k, kind);
                text.push_str(&format!(" {{{k}: {v}}}"));
            }
            text.push(')');
            text
        };
    let pick_var = |rng: &mut ChaCha8Rng,
                    vars: &mut Vec<(String, &'static str)>,
                    ty: &'static str,
                    reuse: f64| {
        let same: Vec<String> = vars
            .iter()
            .filter(|(_, t)| *t == ty)
            .map(|(v, _)| v.clone())
            .collect();
        match same.choose(rng) {
            Some(v) if rng.random_bool(reuse) => v.clone(),
            _ => {
                let v = format!("n{}", vars.len());
                vars.push((v.clone(), ty));
                v
            }
        }
    };

    for pi in 0..rng.random_range(1..=3) {
        let start_ty = *TYPES.choose(rng).unwrap();
        let mut ty = start_ty;
        let first = if pi > 0 && rng.random_bool(0.7) {
            let (v, t) = vars.choose(rng).unwrap().clone();
            ty = t;
            v
        } else {
            pick_var(rng, &mut vars, ty, 0.0)
        };
        let mut text = node_text(rng, &mut params, &first, ty);
        for _ in 0..rng.random_range(0..=2) {
            let (dir, rel, next) = if rng.random_bool(0.1) {
                let noisy = hops_from(TYPES.choose(rng).unwrap());
                *noisy.choose(rng).unwrap()
            } else {
                *hops_from(ty).choose(rng).unwrap()
            };
            let mut inner = String::new();
            if rng.random_bool(0.2) {
                let v = format!("r{}", edge_vars.len());
                inner.push_str(&v);
                edge_vars.push(v);
            }
            if rng.random_bool(0.7) {
                inner.push(':');
                inner.push_str(rel);
            }
            let bare = inner.is_empty() && rng.random_bool(0.5);
            text.push_str(&match (dir, bare) {
                ("->", true) => "-->".to_owned(),
                ("->", false) => format!("-[{inner}]->"),
                ("<-", _) => format!("<-[{inner}]-"),
                (_, true) => "--".to_owned(),
                (_, false) => format!("-[{inner}]-"),
            });
            let v = pick_var(rng, &mut vars, next, 0.15);
            text.push_str(&node_text(rng, &mut params, &v, next));
            ty = next;
        }
        patterns.push(text);
    }

    let ops = ["=", "<>", "<", "<=", ">", ">=", "<>", ">="];
    let mut conds = Vec::new();
    for _ in 0..rng.random_range(0..=2) {
        if !edge_vars.is_empty() && rng.random_bool(0.2) {
            let e = edge_vars.choose(rng).unwrap();
            let v = value(rng, &mut params, "since", Kind::Int);
            conds.push(format!("{e}.since {} {v}", ops.choose(rng).unwrap()));
            continue;
        }
        let (var, ty) = vars.choose(rng).unwrap().clone();
        let scope = if rng.random_bool(0.1) { None } else { Some(ty) };
        let (k, kind) = *keys_of(scope).choose(rng).unwrap();
        let v = value(rng, &mut params, k, kind);
        conds.push(format!("{var}.{k} {} {v}", ops.choose(rng).unwrap()));
    }

    let prop_of = |rng: &mut ChaCha8Rng, vars: &[(String, &'static str)]| -> String {
        let (var, ty) = vars.choose(rng).unwrap();
        let (k, _) = *keys_of(Some(ty)).choose(rng).unwrap();
        format!("{var}.{k}")
    };
    let int_prop = |rng: &mut ChaCha8Rng, vars: &[(String, &'static str)]| -> String {
        let (var, ty) = vars.choose(rng).unwrap();
        let ints: Vec<&str> = keys_of(Some(ty))
            .iter()
            .filter(|(_, t)| *t == Kind::Int)
            .map(|(k, _)| *k)
            .collect();
        match ints.choose(rng) {
            Some(k) => format!("{var}.{k}"),
            None => format!("{var}.uid"),
        }
    };
    let aggregate = rng.random_bool(0.3);
    let mut items: Vec<String> = Vec::new();
    if aggregate {
        if rng.random_bool(0.6) {
            items.push(prop_of(rng, &vars));
        }
        for _ in 0..rng.random_range(1..=2) {
            items.push(match rng.random_range(0..6) {
                0 => "count(*)".to_owned(),
                1 => format!("count({})", prop_of(rng, &vars)),
                2 => format!("sum({})", int_prop(rng, &vars)),
                3 => format!("avg({})", int_prop(rng, &vars)),
                4 => format!("min({})", prop_of(rng, &vars)),
                _ => format!("max({})", prop_of(rng, &vars)),
            });
        }
    } else {
        for _ in 0..rng.random_range(1..=3) {
            let pick = rng.random_range(0..10);
            let item = if pick < 2 {
                vars.choose(rng).unwrap().0.clone()
            } else if pick < 3 && !edge_vars.is_empty() {
                edge_vars.choose(rng).unwrap().clone()
            } else {
                prop_of(rng, &vars)
            };
            if !items.contains(&item) {
                items.push(item);
            }
        }
    }
    let ordered = rng.random_bool(0.35);
    let aliases: Vec<String> = (0..items.len()).map(|i| format!("c{i}")).collect();
    let returns: Vec<String> = items
        .iter()
        .zip(&aliases)
        .map(|(e, a)| format!("{e} AS {a}"))
        .collect();
    let mut text = format!("MATCH {}", patterns.join(", "));
    if !conds.is_empty() {
        text.push_str(&format!(" WHERE {}", conds.join(" AND ")));
    }
    text.push_str(&format!(" RETURN {}", returns.join(", ")));
    if ordered {
        let keys: Vec<String> = aliases
            .iter()
            .map(|a| {
                if rng.random_bool(0.4) {
                    format!("{a} DESC")
                } else {
                    a.clone()
                }
            })
            .collect();
        text.push_str(&format!(" ORDER BY {}", keys.join(", ")));
        if rng.random_bool(0.7) {
            text.push_str(&format!(" LIMIT {}", rng.random_range(0..8)));
        }
    }
    GeneratedQuery {
        text,
        params,
        ordered,
    }
}
