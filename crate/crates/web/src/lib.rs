//! WebAssembly bindings for the demo page in `www/`. Each export takes a
//! presentation in the `.grp` text format and returns a JSON string.
//!
//! Everything runs on the calling thread and without a clock, so the per-class
//! time cap is off; the Hirsch length and index caps still apply.

use serde_json::json;
use wasm_bindgen::prelude::*;

use nilgenus::homcalc::AbelianInvariants;
use nilgenus::l2betti::{build_tower, luck_estimate, TowerStrategy};
use nilgenus::nilquot::nilpotent_quotient;
use nilgenus::subgroups::low_index_with_jobs;
use nilgenus::{Caps, Presentation};

fn caps() -> Caps {
    Caps {
        max_hirsch: 120,
        ..Caps::without_clock()
    }
}

fn parse(text: &str) -> Result<Presentation, String> {
    Presentation::parse(text).map_err(|e| e.to_string())
}

pub fn lcs_ranks_json(text: &str, class: u32) -> Result<String, String> {
    let p = parse(text)?;
    let q = nilpotent_quotient(&p, class, &caps()).map_err(|e| e.to_string())?;
    let inv = q.lcs_invariants();
    Ok(json!({
        "ranks": inv.ranks(),
        "factors": inv.factors.iter().map(AbelianInvariants::to_string).collect::<Vec<_>>(),
        "hirsch_length": q.hirsch_length(),
    })
    .to_string())
}

/// `tower` is `m-of-d` or `p-congruence:<prime>`.
pub fn luck_ratios_json(text: &str, tower: &str, depth: usize) -> Result<String, String> {
    let p = parse(text)?;
    let strategy = match tower.split_once(':') {
        None if tower == "m-of-d" => TowerStrategy::MOfD,
        Some(("p-congruence", q)) => TowerStrategy::PCongruence(q.parse().map_err(|_| format!("bad prime `{q}`"))?),
        _ => return Err(format!("unknown tower `{tower}`")),
    };
    let t = build_tower(&p, &strategy, depth, &caps()).map_err(|e| e.to_string())?;
    let e = luck_estimate(&p, &t, 1).map_err(|e| e.to_string())?;
    let steps: Vec<_> = (0..e.indices.len())
        .map(|i| {
            json!({
                "label": t.labels[i],
                "index": e.indices[i],
                "b1": e.betti[i],
                "ratio": e.ratios[i].to_string(),
                "num": e.ratios[i].numer(),
                "den": e.ratios[i].denom(),
            })
        })
        .collect();
    Ok(json!({ "steps": steps }).to_string())
}

pub fn low_index_json(text: &str, max: usize, normal: bool) -> Result<String, String> {
    let p = parse(text)?;
    let found = low_index_with_jobs(&p, max, normal, 1).map_err(|e| e.to_string())?;
    let mut by_index = vec![0usize; max + 1];
    let subs: Vec<_> = found
        .iter()
        .map(|r| {
            by_index[r.index] += 1;
            json!({
                "index": r.index,
                "normal": r.normal,
                "generators": r.table.subgroup_generators().iter().map(|w| p.show(w)).collect::<Vec<_>>(),
            })
        })
        .collect();
    Ok(json!({ "count": found.len(), "by_index": by_index, "subgroups": subs }).to_string())
}

#[wasm_bindgen]
pub fn lcs_ranks(text: &str, class: u32) -> Result<String, JsError> {
    lcs_ranks_json(text, class).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn luck_ratios(text: &str, tower: &str, depth: usize) -> Result<String, JsError> {
    luck_ratios_json(text, tower, depth).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn low_index(text: &str, max: usize, normal: bool) -> Result<String, JsError> {
    low_index_json(text, max, normal).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    const F2: &str = "gens: x y\n";

    #[test]
    fn ranks_of_free_group() {
        let v: serde_json::Value = serde_json::from_str(&lcs_ranks_json(F2, 4).unwrap()).unwrap();
        assert_eq!(v["ranks"], json!([2, 1, 2, 3]));
        assert_eq!(v["factors"][0], "Z^2");
    }

    #[test]
    fn congruence_ratios() {
        let v: serde_json::Value = serde_json::from_str(&luck_ratios_json(F2, "p-congruence:2", 2).unwrap()).unwrap();
        assert_eq!(v["steps"][1]["ratio"], "17/16");
        assert_eq!(v["steps"][1]["den"], 16);
        assert!(luck_ratios_json(F2, "p-congruence:6", 1).is_err());
        assert!(luck_ratios_json(F2, "dyadic", 1).is_err());
    }

    #[test]
    fn counts_by_index() {
        let v: serde_json::Value = serde_json::from_str(&low_index_json(F2, 3, false).unwrap()).unwrap();
        assert_eq!(v["by_index"], json!([0, 1, 3, 7]));
    }

    #[test]
    fn parse_errors_are_reported() {
        assert!(lcs_ranks_json("gens: a\nrel:", 2).unwrap_err().contains("empty relator"));
    }
}
