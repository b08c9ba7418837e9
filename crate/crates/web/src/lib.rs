//! WebAssembly bindings for the browser demo. Each export takes and returns strings; the
//! JSON payloads carry the edge list so the page can draw without decoding graph6 itself.

use immersion_core::generate::random_alpha2 as random_graph;
use immersion_core::graph6;
use immersion_core::immersion::{
    find_target_immersion, Budget, ImmersionCertificate, SearchOutcome, TargetSpec,
};
use immersion_core::invariants::{chromatic_number_alpha2, has_induced_c4, independence_number};
use immersion_core::proof::{decompose, Decomposition};
use immersion_core::Graph;
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Keeps a single query interactive in the browser.
pub const BROWSER_BUDGET: u64 = 2_000_000;

#[derive(Serialize)]
struct Drawing {
    graph6: String,
    n: usize,
    edges: Vec<(usize, usize)>,
}

fn drawing(g: &Graph) -> Drawing {
    Drawing {
        graph6: graph6::encode(g).unwrap_or_default(),
        n: g.order(),
        edges: g.edges().collect(),
    }
}

fn parse(line: &str) -> Result<Graph, String> {
    graph6::decode(line.trim()).map_err(|e| format!("invalid graph6: {e}"))
}

#[derive(Serialize)]
struct ImmerseView {
    graph: Drawing,
    target: String,
    status: &'static str,
    certificate: Option<ImmersionCertificate>,
}

/// Searches for `target` (`kst:S,T`, `clique:K`, `kll:L,T` or `g6:<line>`) in the graph.
pub fn immerse_json(g6: &str, target: &str) -> Result<String, String> {
    let g = parse(g6)?;
    let spec: TargetSpec = target.trim().parse().map_err(|e| format!("{e}"))?;
    let outcome = find_target_immersion(&g, &spec, Budget::nodes(BROWSER_BUDGET))
        .map_err(|e| e.to_string())?;
    let (status, certificate) = match outcome {
        SearchOutcome::Found(c) => ("found", Some(c)),
        SearchOutcome::NotFound => ("not_found", None),
        SearchOutcome::Undecided => ("undecided", None),
    };
    Ok(serde_json::to_string(&ImmerseView {
        graph: drawing(&g),
        target: spec.to_string(),
        status,
        certificate,
    })
    .expect("view serializes"))
}

#[derive(Serialize)]
struct DecomposeView {
    graph: Drawing,
    decomposition: Decomposition,
}

/// The common-neighbor / clique partition around a non-adjacent pair.
pub fn decompose_json(g6: &str, x: usize, y: usize) -> Result<String, String> {
    let g = parse(g6)?;
    let decomposition = decompose(&g, x, y).map_err(|e| e.to_string())?;
    Ok(serde_json::to_string(&DecomposeView {
        graph: drawing(&g),
        decomposition,
    })
    .expect("view serializes"))
}

#[derive(Serialize)]
struct RandomView {
    graph: Drawing,
    alpha: usize,
    chi: Option<usize>,
    induced_c4: bool,
}

/// A seeded random graph with independence number at most two, with its invariants.
pub fn random_alpha2_json(n: usize, seed: u64) -> Result<String, String> {
    if n == 0 || n > 24 {
        return Err("order must be between 1 and 24".into());
    }
    let g = random_graph(n, seed);
    Ok(serde_json::to_string(&RandomView {
        graph: drawing(&g),
        alpha: independence_number(&g),
        chi: chromatic_number_alpha2(&g).ok(),
        induced_c4: has_induced_c4(&g),
    })
    .expect("view serializes"))
}

#[wasm_bindgen]
pub fn immerse(g6: &str, target: &str) -> Result<String, JsValue> {
    immerse_json(g6, target).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = decomposePair)]
pub fn decompose_pair(g6: &str, x: usize, y: usize) -> Result<String, JsValue> {
    decompose_json(g6, x, y).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = randomAlpha2)]
pub fn random_alpha2(n: usize, seed: u64) -> Result<String, JsValue> {
    random_alpha2_json(n, seed).map_err(|e| JsValue::from_str(&e))
}
