use std::fmt::Write as _;

use serde::Serialize;

use crate::observables::ModelName;

/// What one source row became.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExpansionEntry {
    pub state: String,
    pub on: String,
    /// Rows emitted for this source row, shared gadget rows counted once.
    pub target_rows: usize,
    /// States created for this source row.
    pub inserted_states: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LoweringReport {
    pub source_model: ModelName,
    pub target_model: ModelName,
    pub backend: Option<String>,
    pub state_count_before: usize,
    pub state_count_after: usize,
    pub inserted_gadget_count: usize,
    pub expansion: Vec<ExpansionEntry>,
}

impl LoweringReport {
    /// Report of two passes run one after the other.
    pub fn then(self, next: LoweringReport) -> LoweringReport {
        LoweringReport {
            source_model: self.source_model,
            target_model: next.target_model,
            backend: self.backend.or(next.backend),
            state_count_before: self.state_count_before,
            state_count_after: next.state_count_after,
            inserted_gadget_count: self.inserted_gadget_count + next.inserted_gadget_count,
            expansion: self.expansion.into_iter().chain(next.expansion).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }

    /// `key: value` lines, one `expansion:` line per source row.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "source_model: {}", self.source_model);
        let _ = writeln!(s, "target_model: {}", self.target_model);
        if let Some(b) = &self.backend {
            let _ = writeln!(s, "backend: {b}");
        }
        let _ = writeln!(s, "state_count_before: {}", self.state_count_before);
        let _ = writeln!(s, "state_count_after: {}", self.state_count_after);
        let _ = writeln!(s, "inserted_gadget_count: {}", self.inserted_gadget_count);
        for e in &self.expansion {
            let _ = writeln!(
                s,
                "expansion: {} {} rows {} states {}",
                e.state, e.on, e.target_rows, e.inserted_states
            );
        }
        s
    }
}
