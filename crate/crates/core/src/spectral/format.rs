//! JSON measure files.
//!
//! ```text
//! {"type":"discrete","atoms":[{"t":1.0,"w":1.0}]}
//! {"type":"lattice","set":"Z","weights":{"0":1.0,"3":0.5}}
//! {"type":"lattice","set":"Z+","uniform":1.0,"cutoff_policy":"tail-bound"}
//! {"type":"density","support":[["-inf","inf"]],"density":"one"}
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use serde_json::Value;

use super::measure::{Atom, Density, SpectralMeasure};
use crate::error::{Error, Result};
use crate::numerics::{IndexSet, Interval};

fn bad(msg: impl Into<String>) -> Error {
    Error::invalid(format!("measure file: {}", msg.into()))
}

fn number(v: &Value, what: &str) -> Result<f64> {
    match v {
        Value::Number(n) => n
            .as_f64()
            .ok_or_else(|| bad(format!("{what} is not a number"))),
        Value::String(s) => match s.trim() {
            "inf" | "+inf" | "Infinity" => Ok(f64::INFINITY),
            "-inf" | "-Infinity" => Ok(f64::NEG_INFINITY),
            other => other
                .parse()
                .map_err(|_| bad(format!("{what} '{other}' is not a number"))),
        },
        _ => Err(bad(format!("{what} must be a number"))),
    }
}

fn field<'a>(obj: &'a Value, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| bad(format!("missing field '{key}'")))
}

impl SpectralMeasure {
    pub fn from_json(v: &Value) -> Result<Self> {
        let kind = field(v, "type")?
            .as_str()
            .ok_or_else(|| bad("'type' must be a string"))?;
        match kind {
            "discrete" => {
                let atoms = field(v, "atoms")?
                    .as_array()
                    .ok_or_else(|| bad("'atoms' must be an array"))?
                    .iter()
                    .map(|a| {
                        Ok(Atom::new(
                            number(field(a, "t")?, "t")?,
                            number(field(a, "w")?, "w")?,
                        ))
                    })
                    .collect::<Result<Vec<_>>>()?;
                SpectralMeasure::discrete(atoms)
            }
            "lattice" => {
                let set = match field(v, "set")?.as_str() {
                    Some("Z") => IndexSet::Integers,
                    Some("Z+") => IndexSet::NonNegative,
                    _ => return Err(bad("'set' must be \"Z\" or \"Z+\"")),
                };
                if let Some(policy) = v.get("cutoff_policy") {
                    if policy.as_str() != Some("tail-bound") {
                        return Err(bad("only the \"tail-bound\" cutoff policy is supported"));
                    }
                }
                match (v.get("weights"), v.get("uniform")) {
                    (Some(w), None) => {
                        let map = w
                            .as_object()
                            .ok_or_else(|| bad("'weights' must be an object"))?;
                        let mut weights = BTreeMap::new();
                        for (k, x) in map {
                            let n: i64 = k
                                .trim()
                                .parse()
                                .map_err(|_| bad(format!("index '{k}' is not an integer")))?;
                            weights.insert(n, number(x, "weight")?);
                        }
                        SpectralMeasure::lattice_table(set, weights)
                    }
                    (None, Some(u)) => SpectralMeasure::lattice_uniform(set, number(u, "uniform")?),
                    _ => Err(bad("lattice needs exactly one of 'weights' and 'uniform'")),
                }
            }
            "density" => {
                let support = field(v, "support")?
                    .as_array()
                    .ok_or_else(|| bad("'support' must be an array"))?
                    .iter()
                    .map(|iv| match iv.as_array().map(Vec::as_slice) {
                        Some([lo, hi]) => {
                            Interval::new(number(lo, "lower end")?, number(hi, "upper end")?)
                        }
                        _ => Err(bad("support entries must be [lo, hi]")),
                    })
                    .collect::<Result<Vec<_>>>()?;
                match field(v, "density")?.as_str() {
                    Some("one") => SpectralMeasure::density(support, Density::One),
                    _ => Err(bad("only \"one\" densities can be read from a file")),
                }
            }
            other => Err(bad(format!("unknown type '{other}'"))),
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        Self::from_json(&serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    /// `lebesgue`, `unit-lattice` (weight 1 on `ℤ`) or `unit-lattice+`
    /// (weight 1 on `ℤ₊`).
    pub fn builtin(name: &str) -> Result<Self> {
        match name {
            "lebesgue" => Ok(Self::lebesgue()),
            "unit-lattice" => Ok(Self::unit_lattice()),
            "unit-lattice+" => Self::lattice_uniform(IndexSet::NonNegative, 1.0),
            _ => Err(Error::invalid(format!("unknown builtin measure '{name}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::LatticeWeights;

    #[test]
    fn discrete_file() {
        let m = SpectralMeasure::from_json_str(
            r#"{"type":"discrete","atoms":[{"t":2,"w":1},{"t":1.0,"w":0.5}]}"#,
        )
        .unwrap();
        assert_eq!(
            m.finite_atoms().unwrap(),
            vec![Atom::new(1.0, 0.5), Atom::new(2.0, 1.0)]
        );
    }

    #[test]
    fn lattice_files() {
        let m = SpectralMeasure::from_json_str(
            r#"{"type":"lattice","set":"Z","uniform":1.0,"cutoff_policy":"tail-bound"}"#,
        )
        .unwrap();
        assert!(matches!(
            m,
            SpectralMeasure::Lattice {
                index_set: IndexSet::Integers,
                weights: LatticeWeights::Uniform(w)
            } if w == 1.0
        ));
        let m = SpectralMeasure::from_json_str(
            r#"{"type":"lattice","set":"Z+","weights":{"0":1.0,"2":0.25}}"#,
        )
        .unwrap();
        assert_eq!(m.total_mass(), 1.25);
        assert!(SpectralMeasure::from_json_str(
            r#"{"type":"lattice","set":"Z+","weights":{"-1":1.0}}"#
        )
        .is_err());
        assert!(
            SpectralMeasure::from_json_str(r#"{"type":"lattice","set":"N","uniform":1.0}"#)
                .is_err()
        );
    }

    #[test]
    fn density_file() {
        let m = SpectralMeasure::from_json_str(
            r#"{"type":"density","support":[["-inf","inf"]],"density":"one"}"#,
        )
        .unwrap();
        assert_eq!(m.hull(), vec![Interval::real_line()]);
        assert!(SpectralMeasure::from_json_str(
            r#"{"type":"density","support":[[1,0]],"density":"one"}"#
        )
        .is_err());
    }

    #[test]
    fn malformed() {
        assert!(SpectralMeasure::from_json_str("{").is_err());
        assert!(SpectralMeasure::from_json_str(r#"{"type":"cantor"}"#).is_err());
        assert!(SpectralMeasure::builtin("nope").is_err());
    }
}
