// Copyright 2026 The ergokit Authors
// SPDX-License-Identifier: Apache-2.0

//! JSON and CSV formats.
//!
//! | type | JSON |
//! |---|---|
//! | spectrum, diagonal state | `[0, 0.6, 2]` |
//! | density matrix | `{"re": [[..]], "im": [[..]]}` (row-major) |
//! | channel | `{"members": [{"weight": w, "re": .., "im": ..}]}` |
//! | energy curve | `{"breakpoints": [[E, v], ..], "range": [lo, hi]}` |
//!
//! Spectra may also be given as one-column CSV, curves are written as
//! two-column CSV with header `E,value`. Parsing always re-validates the type
//! invariants.

use nalgebra::Complex;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::curve::EnergyCurve;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::protocols::{RandomUnitaryChannel, UnitaryChannel};
use crate::scalar::Scalar;
use crate::spectrum::Spectrum;
use crate::state::{DensityMatrix, DiagonalState};

#[derive(Serialize, Deserialize)]
struct MatrixRepr<T> {
    re: Vec<Vec<T>>,
    im: Vec<Vec<T>>,
}

#[derive(Serialize, Deserialize)]
struct MemberRepr<T> {
    weight: T,
    re: Vec<Vec<T>>,
    im: Vec<Vec<T>>,
}

#[derive(Serialize, Deserialize)]
struct ChannelRepr<T> {
    members: Vec<MemberRepr<T>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum AnyChannelRepr<T> {
    Mixture(ChannelRepr<T>),
    Single(MatrixRepr<T>),
}

fn split<T: Scalar>(m: &CMatrix<T>) -> (Vec<Vec<T>>, Vec<Vec<T>>) {
    let rows = |f: fn(&Complex<T>) -> T| {
        (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| f(&m[(i, j)])).collect())
            .collect()
    };
    (rows(|z| z.re), rows(|z| z.im))
}

fn join<T: Scalar>(re: &[Vec<T>], im: &[Vec<T>]) -> Result<CMatrix<T>> {
    let rows = re.len();
    let cols = re.first().map_or(0, Vec::len);
    if im.len() != rows || re.iter().chain(im).any(|r| r.len() != cols) {
        return Err(Error::Parse(
            "`re` and `im` must be rectangular and of equal shape".into(),
        ));
    }
    Ok(CMatrix::from_fn(rows, cols, |i, j| {
        Complex::new(re[i][j], im[i][j])
    }))
}

impl<T: Scalar + Serialize> Serialize for DensityMatrix<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (re, im) = split(self.matrix());
        MatrixRepr { re, im }.serialize(s)
    }
}

impl<'de, T: Scalar + Deserialize<'de>> Deserialize<'de> for DensityMatrix<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = MatrixRepr::<T>::deserialize(d)?;
        join(&r.re, &r.im)
            .and_then(DensityMatrix::new)
            .map_err(D::Error::custom)
    }
}

impl<T: Scalar + Serialize> Serialize for DiagonalState<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.probs().serialize(s)
    }
}

impl<'de, T: Scalar + Deserialize<'de>> Deserialize<'de> for DiagonalState<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        DiagonalState::new(Vec::<T>::deserialize(d)?).map_err(D::Error::custom)
    }
}

impl<T: Scalar + Serialize> Serialize for Spectrum<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.levels().serialize(s)
    }
}

impl<'de, T: Scalar + Deserialize<'de>> Deserialize<'de> for Spectrum<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Spectrum::new(Vec::<T>::deserialize(d)?).map_err(D::Error::custom)
    }
}

impl<T: Scalar + Serialize> Serialize for UnitaryChannel<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RandomUnitaryChannel::from(self.clone()).serialize(s)
    }
}

impl<T: Scalar + Serialize> Serialize for RandomUnitaryChannel<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let members = self
            .entries()
            .iter()
            .map(|(w, u)| {
                let (re, im) = split(u.matrix());
                MemberRepr { weight: *w, re, im }
            })
            .collect();
        ChannelRepr { members }.serialize(s)
    }
}

/// Accepts the `members` form or a bare `{"re", "im"}` unitary.
impl<'de, T: Scalar + Deserialize<'de>> Deserialize<'de> for RandomUnitaryChannel<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let build = || -> Result<Self> {
            Ok(
                match AnyChannelRepr::<T>::deserialize(d).map_err(|e| Error::Parse(e.to_string()))? {
                    AnyChannelRepr::Single(m) => UnitaryChannel::new(join(&m.re, &m.im)?)?.into(),
                    AnyChannelRepr::Mixture(c) => RandomUnitaryChannel::new(
                        c.members
                            .into_iter()
                            .map(|m| Ok((m.weight, UnitaryChannel::new(join(&m.re, &m.im)?)?)))
                            .collect::<Result<_>>()?,
                    )?,
                },
            )
        };
        build().map_err(D::Error::custom)
    }
}

pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    serde_json::to_string(value).map_err(|e| Error::Parse(e.to_string()))
}

pub fn to_json_pretty<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))
}

/// Spectrum from a JSON array or a one-column CSV (an optional non-numeric
/// header line is skipped).
pub fn parse_spectrum(text: &str) -> Result<Spectrum<f64>> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('[') {
        return from_json(trimmed);
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(false)
        .from_reader(text.as_bytes());
    let mut levels = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse(e.to_string()))?;
        if record.len() != 1 {
            return Err(Error::Parse(format!(
                "spectrum CSV must have one column, row {} has {}",
                row + 1,
                record.len()
            )));
        }
        match record[0].parse::<f64>() {
            Ok(x) => levels.push(x),
            Err(_) if row == 0 => continue,
            Err(_) => {
                return Err(Error::Parse(format!(
                    "row {}: `{}` is not a number",
                    row + 1,
                    &record[0]
                )))
            }
        }
    }
    Spectrum::new(levels)
}

/// Writes `E,value` rows.
pub fn curve_to_csv<T: Scalar + Serialize>(curve: &EnergyCurve<T>) -> Result<String> {
    rows_to_csv(&["E", "value"], curve.breakpoints().iter().map(|b| b.to_vec()))
}

pub fn curve_from_csv(text: &str) -> Result<EnergyCurve<f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut breakpoints = Vec::new();
    for record in reader.deserialize::<(f64, f64)>() {
        let (e, v) = record.map_err(|e| Error::Parse(e.to_string()))?;
        breakpoints.push([e, v]);
    }
    EnergyCurve::from_breakpoints(breakpoints, None)
}

/// Generic numeric table with a header row.
pub fn rows_to_csv<T, I>(header: &[&str], rows: I) -> Result<String>
where
    T: Serialize,
    I: IntoIterator<Item = Vec<T>>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(|e| Error::Parse(e.to_string()))?;
    for row in rows {
        w.serialize(row).map_err(|e| Error::Parse(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::min_ergotropy_curve;
    use crate::protocols::u_rev;

    #[test]
    fn spectrum_json_and_csv() {
        let s = parse_spectrum("[2, 0, 0.6]").unwrap();
        assert_eq!(s.levels(), &[0.0, 0.6, 2.0]);
        assert_eq!(parse_spectrum("level\n0\n0.6\n2\n").unwrap(), s);
        assert_eq!(parse_spectrum("0\n0.6\n2").unwrap(), s);
        assert!(parse_spectrum("0\nx\n2").is_err());
        assert!(parse_spectrum("0,1\n2,3").is_err());
        assert!(parse_spectrum("[]").is_err());
        assert_eq!(to_json(&s).unwrap(), "[0.0,0.6,2.0]");
    }

    #[test]
    fn bit_exact_round_trip() {
        let levels = vec![0.1 + 0.2, 1.0 / 3.0, std::f64::consts::PI, 1e-300];
        let s = Spectrum::new(levels).unwrap();
        let back: Spectrum<f64> = from_json(&to_json(&s).unwrap()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn density_matrix_round_trip_and_validation() {
        let spec = Spectrum::new(vec![0.0, 0.6, 2.0]).unwrap();
        let rho = DensityMatrix::sample_at_energy(&spec, 1.1, 3).unwrap();
        let back: DensityMatrix<f64> = from_json(&to_json(&rho).unwrap()).unwrap();
        assert_eq!(back.matrix(), rho.matrix());
        let not_unit = r#"{"re": [[0.5, 0], [0, 0.4]], "im": [[0, 0], [0, 0]]}"#;
        let err = from_json::<DensityMatrix<f64>>(not_unit).unwrap_err();
        assert!(err.to_string().contains("trace"), "{err}");
        let not_psd = r#"{"re": [[1.5, 0], [0, -0.5]], "im": [[0, 0], [0, 0]]}"#;
        assert!(from_json::<DensityMatrix<f64>>(not_psd)
            .unwrap_err()
            .to_string()
            .contains("positive"));
        let ragged = r#"{"re": [[1, 0], [0]], "im": [[0, 0], [0, 0]]}"#;
        assert!(from_json::<DensityMatrix<f64>>(ragged).is_err());
    }

    #[test]
    fn channel_formats() {
        let c: RandomUnitaryChannel<f64> =
            RandomUnitaryChannel::new(vec![(0.25, UnitaryChannel::identity(2)), (0.75, u_rev(2))]).unwrap();
        let back: RandomUnitaryChannel<f64> = from_json(&to_json(&c).unwrap()).unwrap();
        assert_eq!(back, c);
        let single: RandomUnitaryChannel<f64> =
            from_json(r#"{"re": [[0, 1], [1, 0]], "im": [[0, 0], [0, 0]]}"#).unwrap();
        assert_eq!(single, RandomUnitaryChannel::from(u_rev(2)));
        let bad = r#"{"members": [{"weight": 1, "re": [[1, 1], [0, 1]], "im": [[0, 0], [0, 0]]}]}"#;
        assert!(from_json::<RandomUnitaryChannel<f64>>(bad).is_err());
    }

    #[test]
    fn curve_csv_round_trip() {
        let c = min_ergotropy_curve(&Spectrum::new(vec![0.0, 1.5, 2.0]).unwrap());
        let text = curve_to_csv(&c).unwrap();
        assert!(text.starts_with("E,value\n"));
        let back = curve_from_csv(&text).unwrap();
        assert_eq!(back.breakpoints(), c.breakpoints());
    }
}
