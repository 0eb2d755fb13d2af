//! Structured-text form of simplicial sets.

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::set::SimplicialSet;

/// One level: per simplex its faces `d_0..d_k` (empty at level 0) and its
/// degeneracies `s_0..s_k` (empty at the top level).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct LevelFile {
    #[serde(default)]
    pub count: usize,
    #[serde(default)]
    pub faces: Vec<Vec<usize>>,
    #[serde(default)]
    pub degeneracies: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct SimplicialSetFile {
    pub name: String,
    pub vertices: Vec<String>,
    pub levels: Vec<LevelFile>,
    /// No nondegenerate simplices above this level, when known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim_bound: Option<usize>,
}

impl SimplicialSetFile {
    pub fn from_set(x: &SimplicialSet) -> Self {
        let levels = (0..=x.dim())
            .map(|k| LevelFile {
                count: x.count(k),
                faces: if k == 0 {
                    Vec::new()
                } else {
                    (0..x.count(k)).map(|s| (0..=k).map(|i| x.face(k, s, i)).collect()).collect()
                },
                degeneracies: if k == x.dim() {
                    Vec::new()
                } else {
                    (0..x.count(k)).map(|s| (0..=k).map(|i| x.degen(k, s, i)).collect()).collect()
                },
            })
            .collect();
        SimplicialSetFile {
            name: x.name().to_string(),
            vertices: x.vertex_labels().to_vec(),
            levels,
            dim_bound: x.dim_bound(),
        }
    }

    /// Builds and validates the simplicial identities.
    pub fn to_set(&self) -> Result<SimplicialSet> {
        if self.levels.is_empty() {
            return Err(Error::Parse("a simplicial set needs at least level 0".into()));
        }
        let dim = self.levels.len() - 1;
        let counts: Vec<usize> = self
            .levels
            .iter()
            .enumerate()
            .map(|(k, l)| if k == 0 { self.vertices.len() } else { l.faces.len() })
            .collect();
        let mut faces = Vec::new();
        let mut degens = Vec::new();
        for (k, level) in self.levels.iter().enumerate() {
            if level.count != 0 && level.count != counts[k] {
                return Err(Error::Parse(format!("level {k} declares {} simplices", level.count)));
            }
            if level.faces.iter().any(|f| f.len() != k + 1) || level.degeneracies.iter().any(|d| d.len() != k + 1) {
                return Err(Error::Parse(format!("level {k} needs {} entries per simplex", k + 1)));
            }
            if k < dim && level.degeneracies.len() != counts[k] {
                return Err(Error::Parse(format!("level {k} needs degeneracies for every simplex")));
            }
            faces.push(level.faces.concat());
            degens.push(if k < dim { level.degeneracies.concat() } else { Vec::new() });
        }
        let set = SimplicialSet::from_tables(self.name.clone(), dim, counts, faces, degens, self.vertices.clone())
            .map_err(|e| Error::Parse(e.to_string()))?
            .with_dim_bound(self.dim_bound);
        let report = set.validate();
        if let Some(v) = report.violations.first() {
            return Err(Error::Invalid(format!("{}: {} at {:?}", self.name, v.rule, v.witness)));
        }
        Ok(set)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Limits;
    use crate::simplicial::build;

    #[test]
    fn round_trip() {
        let x = build::boundary(2, 3, &Limits::default()).unwrap();
        let file = SimplicialSetFile::from_set(&x);
        let text = serde_json::to_string(&file).unwrap();
        let back: SimplicialSetFile = serde_json::from_str(&text).unwrap();
        let y = back.to_set().unwrap();
        assert_eq!(y.counts(), x.counts());
        assert_eq!(SimplicialSetFile::from_set(&y), file);
    }

    #[test]
    fn corrupted_interval_is_rejected() {
        let x = build::simplex(1, 1, &Limits::default()).unwrap();
        let mut file = SimplicialSetFile::from_set(&x);
        // the degenerate edge on vertex 0 now claims vertex 1 as a face
        let degenerate_edge = file.levels[0].degeneracies[0][0];
        file.levels[1].faces[degenerate_edge] = vec![1, 0];
        let err = file.to_set().unwrap_err();
        assert!(err.to_string().contains("face_degeneracy"), "{err}");
    }
}
