//! Browser bindings for the demo page in `www/`.
//!
//! Each exported function returns a JSON string. The logic sits in plain
//! functions returning `Result<String, String>` so it can be tested natively;
//! the `#[wasm_bindgen]` wrappers only convert errors.

use cubesum_core::identities::{four_cube_rep, three_cube_identity};
use cubesum_core::mersenne::{p_mod9, x_residue_filter};
use cubesum_core::record::OutputRecord;
use cubesum_core::{p_value, search, Mode, PIndex, SearchConfig};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest index the page will search; keeps a click under a second or so.
pub const MAX_SEARCH_N: u32 = 30;

/// Largest index for the closed forms (the numbers get long, not slow).
pub const MAX_IDENTITY_N: u32 = 2000;

#[derive(Serialize)]
struct Info {
    n: u32,
    p: String,
    digits: usize,
    mod9: u32,
    x_mod3: Vec<u32>,
}

#[derive(Serialize)]
struct Found {
    n: u32,
    mode: Mode,
    x_max: u64,
    complete: bool,
    x_factored: u64,
    x_filtered: u64,
    reps: Vec<OutputRecord>,
    byproducts: Vec<OutputRecord>,
}

fn index(n: u32, max: u32) -> Result<PIndex, String> {
    if n > max {
        return Err(format!("n must be at most {max}"));
    }
    PIndex::new(n).map_err(|e| e.to_string())
}

fn json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

/// `P_n`, its residue mod 9 and the residues of `x` mod 3 the search keeps.
pub fn p_info_json(n: u32) -> Result<String, String> {
    let n = index(n, MAX_IDENTITY_N)?;
    let p = p_value(n).to_string();
    json(&Info {
        n: n.get(),
        digits: p.len(),
        p,
        mod9: p_mod9(n),
        x_mod3: x_residue_filter(n).allowed,
    })
}

/// Closed-form three-cube representations plus the four-cube one.
pub fn identities_json(n: u32) -> Result<String, String> {
    let n = index(n, MAX_IDENTITY_N)?;
    let mut reps = three_cube_identity(n).map_err(|e| e.to_string())?;
    if n.get() >= 2 {
        reps.push(four_cube_rep(n).map_err(|e| e.to_string())?);
    }
    let records: Vec<OutputRecord> = reps
        .iter()
        .map(|r| OutputRecord::from_rep(r, None, true))
        .collect();
    json(&records)
}

/// Divisor-method search for `n <= MAX_SEARCH_N`; `mixed` widens the
/// x-range to twice the cube root and keeps every sign pattern.
pub fn search_json(n: u32, mixed: bool) -> Result<String, String> {
    let n = index(n, MAX_SEARCH_N)?;
    let mode = if mixed { Mode::Mixed } else { Mode::Nonneg };
    let cfg = SearchConfig {
        mode,
        ..Default::default()
    };
    let set = search(n, &cfg).map_err(|e| e.to_string())?;
    let records = |v: &[cubesum_core::Representation]| {
        v.iter()
            .map(|r| OutputRecord::from_rep(r, Some(mode), set.complete))
            .collect()
    };
    json(&Found {
        n: n.get(),
        mode,
        x_max: set.x_max,
        complete: set.complete,
        x_factored: set.stats.x_factored,
        x_filtered: set.stats.x_filtered,
        reps: records(&set.reps),
        byproducts: records(&set.byproducts),
    })
}

#[wasm_bindgen]
pub fn p_info(n: u32) -> Result<String, JsError> {
    p_info_json(n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn identities(n: u32) -> Result<String, JsError> {
    identities_json(n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn search_cubes(n: u32, mixed: bool) -> Result<String, JsError> {
    search_json(n, mixed).map_err(|e| JsError::new(&e))
}
