//! JSON file format. Scalars are strings `"a/b"` or `"a/b+c/di"`, fields are `"Q"`,
//! `"Qi"` or `{"GF": p}`. `u*` is the conjugate transpose over ℚ(i).

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::chains::SpectralPoint;
use crate::fieldkit::{FieldTag, Matrix, Scalar, Vector};
use crate::pencil::{Pencil, RankOnePencil};
use crate::relation::LinearRelation;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub field: FieldTag,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationFile {
    pub field: FieldTag,
    pub d: usize,
    /// Each row is `(x | y)` with `2d` entries.
    pub pairs: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PencilFile {
    pub field: FieldTag,
    #[serde(rename = "E")]
    pub e: Vec<Vec<String>>,
    #[serde(rename = "F")]
    pub f: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankOneFile {
    pub field: FieldTag,
    pub u: Vec<String>,
    pub v: Vec<String>,
    pub w: Vec<String>,
}

fn checked(field: FieldTag) -> Result<FieldTag> {
    match field {
        FieldTag::Gf(p) => FieldTag::gf(p),
        f => Ok(f),
    }
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

fn parse_vector(field: FieldTag, row: &[String]) -> Result<Vector> {
    row.iter().map(|s| field.parse(s)).collect()
}

fn parse_matrix(field: FieldTag, rows: &[Vec<String>]) -> Result<Matrix> {
    let cols = rows.first().map_or(0, Vec::len);
    let rows = rows.iter().map(|r| parse_vector(field, r)).collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(field, cols, rows)
}

fn strings(v: &[Scalar]) -> Vec<String> {
    v.iter().map(Scalar::to_string).collect()
}

impl MatrixFile {
    pub fn parse(text: &str) -> Result<Matrix> {
        let f: MatrixFile = parse_json(text)?;
        parse_matrix(checked(f.field)?, &f.matrix)
    }

    pub fn from_matrix(m: &Matrix) -> Self {
        MatrixFile { field: m.field(), matrix: m.to_strings() }
    }
}

impl RelationFile {
    pub fn parse(text: &str) -> Result<LinearRelation> {
        parse_json::<RelationFile>(text)?.to_relation()
    }

    pub fn to_relation(&self) -> Result<LinearRelation> {
        let field = checked(self.field)?;
        let pairs = self
            .pairs
            .iter()
            .map(|row| {
                if row.len() != 2 * self.d {
                    return Err(Error::DimensionMismatch { expected: 2 * self.d, found: row.len() });
                }
                let v = parse_vector(field, row)?;
                Ok((v[..self.d].to_vec(), v[self.d..].to_vec()))
            })
            .collect::<Result<Vec<_>>>()?;
        LinearRelation::from_pairs(field, self.d, &pairs)
    }

    pub fn from_relation(r: &LinearRelation) -> Self {
        RelationFile { field: r.field(), d: r.d(), pairs: r.to_strings() }
    }
}

impl PencilFile {
    pub fn parse(text: &str) -> Result<Pencil> {
        parse_json::<PencilFile>(text)?.to_pencil()
    }

    pub fn to_pencil(&self) -> Result<Pencil> {
        let field = checked(self.field)?;
        Pencil::new(parse_matrix(field, &self.e)?, parse_matrix(field, &self.f)?)
    }

    pub fn from_pencil(p: &Pencil) -> Self {
        PencilFile { field: p.field(), e: p.e().to_strings(), f: p.f().to_strings() }
    }
}

impl RankOneFile {
    pub fn parse(text: &str) -> Result<RankOnePencil> {
        parse_json::<RankOneFile>(text)?.to_rank_one()
    }

    pub fn to_rank_one(&self) -> Result<RankOnePencil> {
        let field = checked(self.field)?;
        RankOnePencil::new(parse_vector(field, &self.u)?, parse_vector(field, &self.v)?, parse_vector(field, &self.w)?)
    }

    pub fn from_rank_one(field: FieldTag, q: &RankOnePencil) -> Self {
        RankOneFile { field, u: strings(q.u()), v: strings(q.v()), w: strings(q.w()) }
    }
}

/// `"inf"` (or `"∞"`) for the point at infinity, otherwise a scalar literal.
pub fn parse_point(field: FieldTag, s: &str) -> Result<SpectralPoint> {
    match s.trim() {
        "inf" | "Inf" | "infinity" | "∞" => Ok(SpectralPoint::Infinity),
        t => field.parse(t).map(SpectralPoint::Finite),
    }
}

/// Anything serializable as a JSON value, for embedding instances in reports.
pub fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("plain data serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relation_round_trip() {
        let text = r#"{"field": "Q", "d": 2, "pairs": [["0","0","1","0"], ["1","0","0","0"], ["0","1","1","0"]]}"#;
        let r = RelationFile::parse(text).unwrap();
        assert_eq!(r.dim(), 3);
        let back = serde_json::to_string(&RelationFile::from_relation(&r)).unwrap();
        assert_eq!(RelationFile::parse(&back).unwrap(), r);
        assert!(RelationFile::parse(r#"{"field": "Q", "d": 2, "pairs": [["1"]]}"#).is_err());
    }

    #[test]
    fn fields_and_scalars() {
        let p = PencilFile::parse(r#"{"field": {"GF": 5}, "E": [["1","0"],["0","1"]], "F": [["1/2","3"],["0","-1"]]}"#)
            .unwrap();
        assert_eq!(p.field(), FieldTag::Gf(5));
        assert_eq!(p.f().get(0, 0), &FieldTag::Gf(5).from_i64(3));
        assert!(PencilFile::parse(r#"{"field": {"GF": 4}, "E": [["1"]], "F": [["1"]]}"#).is_err());
        let q = RankOneFile::parse(r#"{"field": "Qi", "u": ["1/2+3i"], "v": ["0"], "w": ["-2i"]}"#).unwrap();
        let json = serde_json::to_value(RankOneFile::from_rank_one(FieldTag::Qi, &q)).unwrap();
        assert_eq!(json["u"][0], "1/2+3i");
        assert_eq!(json["field"], "Qi");
        assert_eq!(serde_json::to_value(FieldTag::Gf(7)).unwrap(), serde_json::json!({"GF": 7}));
        let m = MatrixFile::parse(r#"{"field": "Q", "matrix": [["1", "2"]]}"#).unwrap();
        assert_eq!((m.rows(), m.cols()), (1, 2));
    }

    #[test]
    fn points() {
        assert_eq!(parse_point(FieldTag::Q, "inf").unwrap(), SpectralPoint::Infinity);
        assert_eq!(parse_point(FieldTag::Q, "-1/3").unwrap(), SpectralPoint::Finite(FieldTag::Q.from_ratio(-1, 3)));
        assert!(parse_point(FieldTag::Q, "x").is_err());
    }
}
