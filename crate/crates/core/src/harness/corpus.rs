//! Canonical regression corpus: closed-form censuses, formula spectra,
//! minimum distances and conjecture verdicts over a fixed grid.

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Result;
use crate::gf::FieldSpec;
use crate::spectrum::Session;
use crate::symmat::census;

use super::{formula_spectrum, SCHEMA_VERSION};

/// `(q, largest m)` covered by the corpus.
pub const CORPUS_GRID: [(u64, usize); 3] = [(3, 5), (5, 4), (7, 4)];

/// `(t, m)` pairs with odd `t < m` for the conjecture verdicts.
pub const CONJECTURE_CASES: [(usize, usize); 5] = [(1, 3), (1, 4), (3, 4), (1, 5), (3, 5)];

#[derive(Serialize)]
struct CodeEntry {
    m: usize,
    t: usize,
    min_distance: Value,
    spectrum: Value,
}

/// Builds the corpus. Output does not depend on `workers`.
pub fn regression_corpus(workers: Option<usize>) -> Result<Value> {
    let mut fields = Vec::new();
    for (q, max_m) in CORPUS_GRID {
        let session = Session::new(FieldSpec::new(q)?).with_workers(workers);
        let censuses: Vec<Value> = (1..=max_m)
            .map(|m| serde_json::to_value(census(q, m)).expect("census serializes"))
            .collect();
        let mut codes = Vec::new();
        for m in 1..=max_m {
            for t in 1..=m {
                let md = session.min_distance(t, m)?;
                codes.push(CodeEntry {
                    m,
                    t,
                    min_distance: json!({
                        "affine": crate::json::big(&md.affine),
                        "projective": crate::json::big(&md.projective),
                    }),
                    spectrum: serde_json::to_value(formula_spectrum(&session, t, m)?)
                        .expect("spectrum serializes"),
                });
            }
        }
        let mut conjectures = Vec::new();
        for (t, m) in CONJECTURE_CASES {
            if m > max_m {
                continue;
            }
            let c = session.conjecture_check(t, m)?;
            conjectures.push(json!({
                "t": t,
                "m": m,
                "w1": crate::json::big(&c.w1),
                "theta": c.theta.as_ref().map(crate::json::big),
                "ordered": c.ordered,
                "equal_gaps": c.equal_gaps,
                "is_global_minimum": c.is_global_minimum,
                "holds": c.holds,
            }));
        }
        fields.push(json!({
            "q": q,
            "censuses": censuses,
            "codes": serde_json::to_value(codes).expect("codes serialize"),
            "conjectures": conjectures,
        }));
    }
    Ok(json!({
        "schema_version": SCHEMA_VERSION,
        "fields": fields,
    }))
}

/// The corpus as pretty-printed JSON with a trailing newline.
pub fn corpus_text(workers: Option<usize>) -> Result<String> {
    let v = regression_corpus(workers)?;
    Ok(serde_json::to_string_pretty(&v).expect("corpus serializes") + "\n")
}
