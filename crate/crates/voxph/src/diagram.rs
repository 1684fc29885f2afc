//! Diagram JSON: `{"n_levels": N, "direction": "sub", "dims": {"0": [[b, d], ...], ...}}`
//! with `null` deaths for essential classes and pairs sorted by birth, then
//! death.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use voxph_core::filtration::Direction;
use voxph_core::persistence::{Death, Diagrams, Pair, PersistenceDiagram};
use voxph_core::Bin;

use crate::Error;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramDocument {
    pub n_levels: Bin,
    pub direction: Direction,
    pub dims: BTreeMap<String, Vec<(Bin, Option<Bin>)>>,
}

impl DiagramDocument {
    pub fn new(diagrams: &Diagrams, direction: Direction) -> Self {
        let dims = diagrams
            .iter()
            .enumerate()
            .map(|(k, pd)| {
                let pairs = pd.pairs().iter().map(|p| (p.birth, p.death.finite())).collect();
                (k.to_string(), pairs)
            })
            .collect();
        Self {
            n_levels: diagrams.levels(),
            direction,
            dims,
        }
    }

    pub fn to_diagrams(&self) -> Result<Diagrams, Error> {
        let pd = |k: usize| -> Result<PersistenceDiagram, Error> {
            let pairs = self
                .dims
                .get(&k.to_string())
                .ok_or_else(|| Error::Invalid(format!("diagram JSON lacks dimension {k}")))?;
            Ok(PersistenceDiagram::new(
                k,
                pairs.iter().map(|&(b, d)| Pair::new(b, d.map_or(Death::Infinite, Death::Finite))),
            ))
        };
        Ok(Diagrams::new(self.n_levels, [pd(0)?, pd(1)?, pd(2)?]))
    }
}

/// Compact single-line JSON with a trailing newline.
pub fn to_json(diagrams: &Diagrams, direction: Direction) -> String {
    let mut s = serde_json::to_string(&DiagramDocument::new(diagrams, direction)).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> Result<(Diagrams, Direction), Error> {
    let doc: DiagramDocument = serde_json::from_str(text)?;
    Ok((doc.to_diagrams()?, doc.direction))
}
