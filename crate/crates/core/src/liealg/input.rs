use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{LieAlgebra, LieError};
use crate::scalars::{parse_rational, Cyclotomic, Matrix};

/// User-supplied algebra in JSON. Brackets are listed as `[i, j, [c_ij^0, …]]`; a missing `(j, i)`
/// entry is filled by antisymmetry.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct AlgebraInput {
    pub dim: usize,
    #[serde(default)]
    pub labels: Option<Vec<String>>,
    pub brackets: Vec<(usize, usize, Vec<Value>)>,
    pub form: Vec<Vec<Value>>,
    #[serde(default)]
    pub autos: Vec<Vec<Vec<Value>>>,
}

/// A scalar given as a JSON number, a `"p/q"` string, or a serialized cyclotomic object.
pub fn parse_scalar(v: &Value) -> Result<Cyclotomic, LieError> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Cyclotomic::from_int(i))
            } else {
                parse_rational(&n.to_string())
                    .map(Cyclotomic::from_rational)
                    .ok_or_else(|| LieError::BadInput(format!("non-integer number {n} must be written as \"p/q\"")))
            }
        }
        Value::String(s) => parse_rational(s)
            .map(Cyclotomic::from_rational)
            .ok_or_else(|| LieError::BadInput(format!("cannot parse scalar {s:?}"))),
        Value::Object(_) => serde_json::from_value(v.clone()).map_err(|e| LieError::BadInput(e.to_string())),
        other => Err(LieError::BadInput(format!("cannot parse scalar {other}"))),
    }
}

fn parse_matrix(rows: &[Vec<Value>], d: usize, what: &str) -> Result<Matrix, LieError> {
    if rows.len() != d || rows.iter().any(|r| r.len() != d) {
        return Err(LieError::BadInput(format!("{what} must be {d}x{d}")));
    }
    let parsed = rows.iter().map(|r| r.iter().map(parse_scalar).collect()).collect::<Result<Vec<Vec<_>>, _>>()?;
    Ok(Matrix::from_rows(parsed))
}

impl AlgebraInput {
    pub fn from_json(s: &str) -> Result<Self, LieError> {
        serde_json::from_str(s).map_err(|e| LieError::BadInput(e.to_string()))
    }

    /// The algebra itself, with the brackets completed by antisymmetry. No axioms are checked.
    pub fn algebra(&self) -> Result<LieAlgebra, LieError> {
        let d = self.dim;
        let labels = match &self.labels {
            Some(l) if l.len() == d => l.clone(),
            Some(_) => return Err(LieError::BadInput(format!("expected {d} labels"))),
            None => (0..d).map(|i| format!("b{i}")).collect(),
        };
        let mut consts = vec![Cyclotomic::zero(); d * d * d];
        let mut given = vec![false; d * d];
        for (i, j, cs) in &self.brackets {
            let (i, j) = (*i, *j);
            if i >= d || j >= d || cs.len() != d {
                return Err(LieError::BadInput(format!("bad bracket entry ({i}, {j})")));
            }
            for (k, c) in cs.iter().enumerate() {
                consts[(i * d + j) * d + k] = parse_scalar(c)?;
            }
            given[i * d + j] = true;
        }
        for i in 0..d {
            for j in 0..d {
                if given[i * d + j] && !given[j * d + i] {
                    for k in 0..d {
                        consts[(j * d + i) * d + k] = -&consts[(i * d + j) * d + k];
                    }
                }
            }
        }
        let form = parse_matrix(&self.form, d, "form")?;
        LieAlgebra::from_parts("custom", labels, consts, form, None)
    }

    pub fn automorphisms(&self) -> Result<Vec<Matrix>, LieError> {
        self.autos.iter().map(|m| parse_matrix(m, self.dim, "automorphism")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn scalars_in_all_forms() {
        assert_eq!(parse_scalar(&json!(3)).unwrap(), Cyclotomic::from_int(3));
        assert_eq!(
            parse_scalar(&json!("-1/2")).unwrap(),
            Cyclotomic::from_rational(crate::scalars::rat(-1, 2))
        );
        let w = Cyclotomic::root_of_unity(3, 1);
        assert_eq!(parse_scalar(&serde_json::to_value(&w).unwrap()).unwrap(), w);
        assert!(parse_scalar(&json!([1])).is_err());
    }

    #[test]
    fn sl2_from_json_matches_preset() {
        let s = r#"{"dim":3,"labels":["e","h","f"],
            "brackets":[[1,0,[2,0,0]],[1,2,[0,0,-2]],[0,2,[0,1,0]]],
            "form":[[0,0,1],[0,2,0],[1,0,0]],
            "autos":[[[-1,0,0],[0,1,0],[0,0,-1]]]}"#;
        let inp = AlgebraInput::from_json(s).unwrap();
        let g = inp.algebra().unwrap();
        let p = LieAlgebra::preset("sl2").unwrap();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    assert_eq!(g.structure_constant(i, j, k), p.structure_constant(i, j, k), "{i}{j}{k}");
                }
            }
        }
        assert_eq!(g.form(), p.form());
        assert_eq!(inp.automorphisms().unwrap().len(), 1);
    }
}
