//! Browser bindings. Every export takes plain strings and numbers and returns
//! a JSON string, `{"error": ...}` on bad input.

use arboreal_core::arith::parse_rat;
use arboreal_core::dynamics::reduced_tree;
use arboreal_core::finitefield::{reduce_poly, reduce_rat, FieldTower, FqElem};
use arboreal_core::newton::NewtonPolygon;
use arboreal_core::ramify::certify_wild;
use arboreal_core::{Prime, QPoly, Rat};
use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

const MAX_DEPTH: usize = 6;
const MAX_HORIZON: usize = 10;
/// Orbit residues grow like `degree^horizon`; past this the page would stall.
const MAX_ORBIT_COST: f64 = 1e4;

fn inputs(poly: &str, prime: u32) -> Result<(QPoly, Prime), String> {
    let f = poly.parse::<QPoly>().map_err(|e| format!("poly: {e}"))?;
    let p = Prime::new(prime.into()).map_err(|e| format!("prime: {e}"))?;
    Ok((f, p))
}

fn base_point(s: &str) -> Result<Rat, String> {
    parse_rat(s).map_err(|e| format!("base point: {e}"))
}

fn bounded(name: &str, v: u32, max: usize) -> Result<usize, String> {
    match v as usize {
        0 => Err(format!("{name} must be at least 1")),
        n if n > max => Err(format!("{name} is capped at {max} in the browser")),
        n => Ok(n),
    }
}

fn finish(r: Result<Value, String>) -> String {
    r.unwrap_or_else(|e| json!({ "error": e })).to_string()
}

pub fn newton_value(poly: &str, prime: u32) -> Result<Value, String> {
    let (f, p) = inputs(poly, prime)?;
    let np = NewtonPolygon::build(&f, p).map_err(|e| e.to_string())?;
    let roots: Vec<Value> = np
        .root_valuations()
        .into_iter()
        .map(|(v, m)| json!({ "val": v, "mult": m }))
        .collect();
    Ok(json!({
        "poly": f.to_string(),
        "points": np.points,
        "vertices": np.vertices,
        "segments": np.segments,
        "root_valuations": roots,
        "ram_denominator": np.ram_denominator().to_string(),
    }))
}

pub fn tree_value(poly: &str, prime: u32, base: &str, depth: u32) -> Result<Value, String> {
    let (f, p) = inputs(poly, prime)?;
    let a = base_point(base)?;
    let depth = bounded("depth", depth, MAX_DEPTH)?;
    let r = reduce_rat(&a, p).ok_or("base point is not integral at p")?;
    let mut tower = FieldTower::new(p).map_err(|e| e.to_string())?;
    let tree = reduced_tree(&f, p, &FqElem::from_fp(r), depth, &mut tower).map_err(|e| e.to_string())?;
    let counts: Vec<usize> = tree.levels.iter().map(Vec::len).collect();
    // parent index of each node, found by applying the reduced map
    let fbar = reduce_poly(&f, p).map_err(|e| e.to_string())?;
    let mut parents: Vec<Vec<usize>> = vec![vec![]];
    for k in 1..tree.levels.len() {
        let mut row = Vec::new();
        for node in &tree.levels[k] {
            let img = tower.eval(&fbar, &node.residue);
            let up = &tree.levels[k - 1];
            let j = (0..up.len()).find(|&j| tower.same(&up[j].residue, &img)).ok_or("orphan residue")?;
            row.push(j);
        }
        parents.push(row);
    }
    let mut v = serde_json::to_value(&tree).map_err(|e| e.to_string())?;
    v["counts"] = json!(counts);
    v["parents"] = json!(parents);
    Ok(v)
}

pub fn certify_value(poly: &str, prime: u32, base: &str, depth: u32, horizon: u32) -> Result<Value, String> {
    let (f, p) = inputs(poly, prime)?;
    let a = base_point(base)?;
    let depth = bounded("depth", depth, MAX_DEPTH)?;
    let horizon = bounded("horizon", horizon, MAX_HORIZON)?;
    if (f.degree() as f64).powi(horizon as i32) > MAX_ORBIT_COST {
        return Err(format!("horizon {horizon} is too large for degree {} in the browser", f.degree()));
    }
    serde_json::to_value(certify_wild(&f, p, &a, depth, horizon)).map_err(|e| e.to_string())
}

/// Newton polygon, root valuations and ramification denominator.
#[wasm_bindgen]
pub fn newton(poly: &str, prime: u32) -> String {
    finish(newton_value(poly, prime))
}

/// Residue-level preimage tree of the reduced base point.
#[wasm_bindgen]
pub fn tree(poly: &str, prime: u32, base: &str, depth: u32) -> String {
    finish(tree_value(poly, prime, base, depth))
}

/// Full wild-ramification certificate.
#[wasm_bindgen]
pub fn certify(poly: &str, prime: u32, base: &str, depth: u32, horizon: u32) -> String {
    finish(certify_value(poly, prime, base, depth, horizon))
}
