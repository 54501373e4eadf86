use serde::{Deserialize, Serialize};

use super::{LatticeError, Logic};

/// On-disk lattice description.
///
/// ```json
/// {"n": 4, "names": ["0", "p", "q", "1"], "leq": [[0,1],[0,2],[1,3],[2,3]], "ortho": [3,2,1,0]}
/// ```
///
/// `leq` may omit reflexive and transitively implied pairs; reading
/// normalizes to the reflexive-transitive closure before validation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawLattice {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
    pub leq: Vec<[usize; 2]>,
    pub ortho: Vec<usize>,
}

impl RawLattice {
    pub fn from_json(text: &str) -> Result<RawLattice, LatticeError> {
        serde_json::from_str(text).map_err(|e| LatticeError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("lattice description serializes")
    }
}

impl Logic {
    /// Parses and validates a lattice file's contents.
    pub fn from_json(text: &str) -> Result<Logic, LatticeError> {
        Logic::validate(&RawLattice::from_json(text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_minimal_file() {
        let l = Logic::from_json(r#"{"n":4,"leq":[[0,1],[0,2],[1,3],[2,3]],"ortho":[3,2,1,0]}"#)
            .unwrap();
        assert_eq!(l.size(), 4);
        assert_eq!(l.name(l.zero()), "e0");
        assert!(l.is_boolean_logic());
    }

    #[test]
    fn malformed() {
        assert!(matches!(Logic::from_json("{\"n\": 2"), Err(LatticeError::Parse(_))));
        assert!(matches!(
            Logic::from_json(r#"{"n":2,"leq":[[0,5]],"ortho":[1,0]}"#),
            Err(LatticeError::IndexOutOfRange { index: 5, n: 2 })
        ));
    }

    #[test]
    fn writes_back() {
        let l = Logic::mo(3).unwrap();
        let again = Logic::from_json(&l.to_raw().to_json()).unwrap();
        assert_eq!(again.to_raw(), l.to_raw());
    }
}
