//! JSON encodings shared by the commands. Complex numbers are `[re, im]`,
//! states are arrays of those, matrices are arrays of rows.

use std::fs::File;
use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use nogo_core::{ComplexMatrix64, DependenceCertificate64, PhaseTriple, PureState64, RankResult, StateSet64, C64};
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

pub fn complex(z: C64) -> Value {
    json!([z.re, z.im])
}

pub fn state(s: &PureState64) -> Value {
    Value::Array(s.amplitudes().iter().copied().map(complex).collect())
}

pub fn states(set: &StateSet64) -> Value {
    Value::Array(set.members().iter().map(state).collect())
}

pub fn matrix(m: &ComplexMatrix64) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array((0..m.cols()).map(|j| complex(m[(i, j)])).collect()))
            .collect(),
    )
}

pub fn rank(r: &RankResult<f64>) -> Value {
    json!({
        "rank": r.rank,
        "singular_values": r.singular_values,
        "tolerance": r.tolerance_used,
    })
}

pub fn phases(p: &PhaseTriple<f64>) -> Value {
    let [t1, t2, t3] = p.as_array();
    json!({
        "theta1": t1,
        "theta2": t2,
        "theta3": t3,
        "theta21": p.theta21(),
        "theta31": p.theta31(),
    })
}

pub fn certificate(c: &DependenceCertificate64) -> Value {
    json!({
        "independent": c.independent,
        "coefficients": c.coefficients.map(|x| x.iter().copied().map(complex).collect::<Vec<_>>()),
        "residual_norm": c.residual_norm,
        "witness_verified": c.witness_verified,
        "gram_rank": rank(&c.gram_rank),
        "gram_determinant": c.gram_determinant,
    })
}

/// Creates an output file before any work is done, so a bad path fails fast.
pub fn create(path: &Path) -> CliResult<File> {
    File::create(path).map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
}

/// Writes `{schema, config, result}` (plus a timestamp unless
/// deterministic) to `sink`, or stdout when there is none.
pub fn emit(config: &RunConfig, result: Value, sink: Option<File>) -> CliResult<()> {
    let mut doc = json!({
        "schema": SCHEMA_VERSION,
        "config": config,
        "result": result,
    });
    if !config.deterministic {
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        doc["timestamp"] = json!(secs);
    }
    let mut text = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Runtime(e.to_string()))?;
    text.push('\n');
    let written = match sink {
        Some(mut f) => f.write_all(text.as_bytes()).and_then(|()| f.flush()),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    written.map_err(|e| CliError::Runtime(format!("writing report: {e}")))
}
