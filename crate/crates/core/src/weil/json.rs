use serde_json::{json, Value};

use super::WeilAlgebra;

impl WeilAlgebra {
    /// JSON description: preset, presentation data, basis, dimension, nilpotency.
    pub fn to_json(&self) -> Value {
        let p = self.presentation();
        json!({
            "preset": self.label(),
            "ring": self.ring().to_string(),
            "nvars": p.map(|p| p.nvars()),
            "cap": p.map(|p| p.cap()),
            "extra_gens": p.map(|p| p.extra_gens().to_vec()),
            "basis": p.map(|p| p.basis().to_vec()),
            "dim": self.dim(),
            "nilpotency": self.nilpotency_order(),
        })
    }

    /// Full multiplication table: entry `[i][j]` is the coefficient array of `e_i e_j`.
    pub fn table_json(&self) -> Value {
        let n = self.dim();
        Value::Array(
            (0..n)
                .map(|i| {
                    Value::Array(
                        (0..n)
                            .map(|j| Value::Array(self.basis_product(i, j).iter().map(|c| c.to_json()).collect()))
                            .collect(),
                    )
                })
                .collect(),
        )
    }
}
