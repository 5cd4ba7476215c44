//! `{"rows": r, "cols": c, "entries": [["1", "-1/2"], ...]}` with rational strings.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ExactMatrix;
use crate::rational::parse_rational;

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<String>>,
}

impl Serialize for ExactMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        MatrixRepr {
            rows: self.rows,
            cols: self.cols,
            entries: (0..self.rows).map(|i| self.row(i).iter().map(|v| v.to_string()).collect()).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ExactMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = MatrixRepr::deserialize(deserializer)?;
        if repr.entries.len() != repr.rows || repr.entries.iter().any(|r| r.len() != repr.cols) {
            return Err(D::Error::custom(format!("entries do not form a {}x{} matrix", repr.rows, repr.cols)));
        }
        let mut data = Vec::with_capacity(repr.rows * repr.cols);
        for s in repr.entries.iter().flatten() {
            data.push(parse_rational(s).map_err(D::Error::custom)?);
        }
        Ok(ExactMatrix { rows: repr.rows, cols: repr.cols, data })
    }
}
