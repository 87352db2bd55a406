//! JSON problem files.
//!
//! ```json
//! {"c": [1, 2], "A_eq": [[1, 1]], "b_eq": [1], "A_ineq": [], "b_ineq": [],
//!  "lower": [0, "-inf"], "upper": ["inf", 4]}
//! ```
//!
//! Optional keys: `name`, `offset`, `names` (`columns`, `eq_rows`,
//! `ineq_rows`). A file may also hold an array of such objects.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::Matrix;
use crate::model::{GeneralLp, ModelError, Names};
use crate::scalar::Scalar;

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("invalid JSON problem: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("bound {0:?} is neither a number nor \"inf\"/\"-inf\"")]
    BadBound(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum Bound {
    Num(f64),
    Text(String),
}

impl Bound {
    fn from_f64(v: f64) -> Self {
        match v {
            f64::INFINITY => Bound::Text("inf".into()),
            f64::NEG_INFINITY => Bound::Text("-inf".into()),
            _ => Bound::Num(v),
        }
    }

    fn to_f64(&self) -> Result<f64, JsonError> {
        match self {
            Bound::Num(v) => Ok(*v),
            Bound::Text(s) => match s.as_str() {
                "inf" | "+inf" | "Infinity" => Ok(f64::INFINITY),
                "-inf" | "-Infinity" => Ok(f64::NEG_INFINITY),
                _ => Err(JsonError::BadBound(s.clone())),
            },
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct NamesDoc {
    #[serde(default)]
    columns: Vec<String>,
    #[serde(default)]
    eq_rows: Vec<String>,
    #[serde(default)]
    ineq_rows: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ProblemDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    c: Vec<f64>,
    #[serde(rename = "A_eq", default)]
    a_eq: Vec<Vec<f64>>,
    #[serde(default)]
    b_eq: Vec<f64>,
    #[serde(rename = "A_ineq", default)]
    a_ineq: Vec<Vec<f64>>,
    #[serde(default)]
    b_ineq: Vec<f64>,
    #[serde(default)]
    lower: Option<Vec<Bound>>,
    #[serde(default)]
    upper: Option<Vec<Bound>>,
    #[serde(default, skip_serializing_if = "is_zero")]
    offset: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    names: Option<NamesDoc>,
}

fn is_zero(v: &f64) -> bool {
    *v == 0.0
}

#[derive(Deserialize)]
#[serde(untagged)]
enum FileDoc {
    One(ProblemDoc),
    Many(Vec<ProblemDoc>),
}

impl ProblemDoc {
    fn into_lp<T: Scalar>(self) -> Result<GeneralLp<T>, JsonError> {
        let d = self.c.len();
        let bounds = |v: Option<Vec<Bound>>, default: f64| -> Result<Vec<f64>, JsonError> {
            match v {
                None => Ok(vec![default; d]),
                Some(bs) => bs.iter().map(Bound::to_f64).collect(),
            }
        };
        let mk = |rows: &[Vec<f64>], what| {
            Matrix::from_rows(d, rows).map_err(|_| ModelError::DimensionMismatch {
                what,
                expected: d,
                found: rows.iter().map(Vec::len).find(|&l| l != d).unwrap_or(0),
            })
        };
        let lp = GeneralLp {
            a_eq: mk(&self.a_eq, "A_eq row")?,
            a_ineq: mk(&self.a_ineq, "A_ineq row")?,
            lower: bounds(self.lower, 0.0)?,
            upper: bounds(self.upper, f64::INFINITY)?,
            c: self.c,
            b_eq: self.b_eq,
            b_ineq: self.b_ineq,
            offset: self.offset,
            names: self.names.map(|n| Names { columns: n.columns, eq_rows: n.eq_rows, ineq_rows: n.ineq_rows }),
        };
        lp.validate()?;
        Ok(lp.cast())
    }

    fn from_lp<T: Scalar>(p: &GeneralLp<T>, name: Option<&str>) -> Self {
        let p: GeneralLp<f64> = p.cast();
        ProblemDoc {
            name: name.map(str::to_string),
            a_eq: p.a_eq.to_rows(),
            a_ineq: p.a_ineq.to_rows(),
            lower: Some(p.lower.iter().map(|&v| Bound::from_f64(v)).collect()),
            upper: Some(p.upper.iter().map(|&v| Bound::from_f64(v)).collect()),
            c: p.c,
            b_eq: p.b_eq,
            b_ineq: p.b_ineq,
            offset: p.offset,
            names: p.names.map(|n| NamesDoc { columns: n.columns, eq_rows: n.eq_rows, ineq_rows: n.ineq_rows }),
        }
    }
}

/// Parses one problem object.
pub fn from_json<T: Scalar>(text: &str) -> Result<GeneralLp<T>, JsonError> {
    serde_json::from_str::<ProblemDoc>(text)?.into_lp()
}

/// Parses a single object or an array of objects, with their names (or
/// `problem_<k>` when absent).
pub fn problem_set_from_json<T: Scalar>(text: &str) -> Result<Vec<(String, GeneralLp<T>)>, JsonError> {
    let docs = match serde_json::from_str::<FileDoc>(text)? {
        FileDoc::One(d) => vec![d],
        FileDoc::Many(ds) => ds,
    };
    docs.into_iter()
        .enumerate()
        .map(|(k, doc)| {
            let name = doc.name.clone().unwrap_or_else(|| format!("problem_{k}"));
            Ok((name, doc.into_lp()?))
        })
        .collect()
}

pub fn to_json<T: Scalar>(p: &GeneralLp<T>, name: Option<&str>) -> String {
    serde_json::to_string_pretty(&ProblemDoc::from_lp(p, name)).expect("problem documents always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{klee_minty_v2, random_instance};

    #[test]
    fn reads_sentinels_and_defaults() {
        let p: GeneralLp<f64> =
            from_json(r#"{"c":[1,-1],"A_ineq":[[1,1]],"b_ineq":[2],"lower":["-inf",0],"upper":[3,"inf"]}"#).unwrap();
        assert_eq!(p.lower, vec![f64::NEG_INFINITY, 0.0]);
        assert_eq!(p.upper, vec![3.0, f64::INFINITY]);
        assert_eq!(p.num_eq(), 0);
        let p: GeneralLp<f64> = from_json(r#"{"c":[1]}"#).unwrap();
        assert_eq!((p.lower[0], p.upper[0]), (0.0, f64::INFINITY));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(from_json::<f64>(r#"{"c":[1],"lower":["low"]}"#), Err(JsonError::BadBound(_))));
        assert!(matches!(from_json::<f64>(r#"{"c":[1],"A_eq":[[1,2]],"b_eq":[1]}"#), Err(JsonError::Model(_))));
        assert!(matches!(from_json::<f64>("{"), Err(JsonError::Parse(_))));
    }

    #[test]
    fn round_trip_is_exact() {
        for p in [klee_minty_v2::<f64>(10).unwrap(), random_instance(5, 4, 2, 5)] {
            let back: GeneralLp<f64> = from_json(&to_json(&p, Some("x"))).unwrap();
            assert_eq!(back, p);
        }
        let mut p = random_instance::<f64>(1, 3, 1, 2);
        p.c[0] = 0.1 + 0.2;
        p.offset = -1.0 / 3.0;
        let back: GeneralLp<f64> = from_json(&to_json(&p, None)).unwrap();
        assert_eq!(back.c[0].to_bits(), p.c[0].to_bits());
        assert_eq!(back.offset.to_bits(), p.offset.to_bits());
    }

    #[test]
    fn problem_sets() {
        let text = format!("[{}, {}]", to_json(&klee_minty_v2::<f64>(3).unwrap(), Some("a")), r#"{"c":[1]}"#);
        let set: Vec<(String, GeneralLp<f64>)> = problem_set_from_json(&text).unwrap();
        assert_eq!(set[0].0, "a");
        assert_eq!(set[1].0, "problem_1");
    }
}
