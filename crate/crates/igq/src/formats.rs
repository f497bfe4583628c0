//! JSON encodings of the core types.
//!
//! Complex numbers are `[re, im]` pairs and matrices are arrays of rows. Every
//! decoder re-validates through the core constructors, so a decoded value
//! satisfies the same invariants as one built in code.

use igq_core::classify::GaugeMap;
use igq_core::dynamics::HJGridState;
use igq_core::linalg::{ComplexMatrix, RealMatrix};
use igq_core::{Complex64, MeasurementBasis, Observable, ProbVec, PureState, QVector};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("invalid value: {0}")]
    Invalid(#[from] igq_core::Error),
    #[error("ragged matrix: row {row} has {found} entries, expected {expected}")]
    Ragged { row: usize, expected: usize, found: usize },
}

pub type Pair = [f64; 2];

fn pair(z: Complex64) -> Pair {
    [z.re, z.im]
}

fn complex([re, im]: Pair) -> Complex64 {
    Complex64::new(re, im)
}

pub fn prob_vec_to_json(p: &ProbVec) -> Vec<f64> {
    p.as_slice().to_vec()
}

pub fn prob_vec_from_json(v: Vec<f64>) -> Result<ProbVec, FormatError> {
    Ok(ProbVec::new(v)?)
}

pub fn state_to_json(v: &PureState) -> Vec<Pair> {
    v.as_slice().iter().copied().map(pair).collect()
}

pub fn state_from_json(v: Vec<Pair>) -> Result<PureState, FormatError> {
    Ok(PureState::new(v.into_iter().map(complex).collect())?)
}

pub fn qvector_to_json(q: &QVector) -> Vec<f64> {
    q.as_slice().to_vec()
}

pub fn qvector_from_json(v: Vec<f64>) -> Result<QVector, FormatError> {
    Ok(QVector::new(v)?)
}

fn rows_to_flat<T: Copy>(rows: Vec<Vec<T>>) -> Result<(usize, usize, Vec<T>), FormatError> {
    let cols = rows.first().map_or(0, Vec::len);
    for (row, r) in rows.iter().enumerate() {
        if r.len() != cols {
            return Err(FormatError::Ragged { row, expected: cols, found: r.len() });
        }
    }
    Ok((rows.len(), cols, rows.into_iter().flatten().collect()))
}

pub fn real_matrix_to_json(m: &RealMatrix) -> Vec<Vec<f64>> {
    m.as_slice().chunks(m.cols().max(1)).map(<[f64]>::to_vec).collect()
}

pub fn real_matrix_from_json(rows: Vec<Vec<f64>>) -> Result<RealMatrix, FormatError> {
    let (r, c, data) = rows_to_flat(rows)?;
    Ok(RealMatrix::from_row_major(r, c, data)?)
}

pub fn complex_matrix_to_json(m: &ComplexMatrix) -> Vec<Vec<Pair>> {
    m.as_slice().chunks(m.cols().max(1)).map(|row| row.iter().copied().map(pair).collect()).collect()
}

pub fn complex_matrix_from_json(rows: Vec<Vec<Pair>>) -> Result<ComplexMatrix, FormatError> {
    let (r, c, data) = rows_to_flat(rows)?;
    Ok(ComplexMatrix::from_row_major(r, c, data.into_iter().map(complex).collect())?)
}

/// Tagged form of a [`GaugeMap`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GaugeMapJson {
    Unitary { matrix: Vec<Vec<Pair>> },
    Antiunitary { matrix: Vec<Vec<Pair>> },
    NotGaugeInvariant { violation: String },
}

impl From<&GaugeMap> for GaugeMapJson {
    fn from(g: &GaugeMap) -> Self {
        match g {
            GaugeMap::Unitary(m) => Self::Unitary { matrix: complex_matrix_to_json(m) },
            GaugeMap::Antiunitary(m) => Self::Antiunitary { matrix: complex_matrix_to_json(m) },
            GaugeMap::NotGaugeInvariant(v) => Self::NotGaugeInvariant { violation: v.to_string() },
        }
    }
}

impl GaugeMapJson {
    /// Rebuilds the map. A `not_gauge_invariant` record has no matrix and
    /// cannot be turned back into a map.
    pub fn into_gauge_map(self) -> Result<GaugeMap, FormatError> {
        match self {
            Self::Unitary { matrix } => Ok(GaugeMap::unitary(complex_matrix_from_json(matrix)?)?),
            Self::Antiunitary { matrix } => Ok(GaugeMap::antiunitary(complex_matrix_from_json(matrix)?)?),
            Self::NotGaugeInvariant { .. } => Err(igq_core::Error::NotGaugeInvariant.into()),
        }
    }
}

/// `{values, basis}`, with `basis` a list of states.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservableJson {
    pub values: Vec<f64>,
    pub basis: Vec<Vec<Pair>>,
}

impl From<&Observable> for ObservableJson {
    fn from(o: &Observable) -> Self {
        Self { values: o.values().to_vec(), basis: o.basis().vectors().iter().map(state_to_json).collect() }
    }
}

impl ObservableJson {
    pub fn into_observable(self) -> Result<Observable, FormatError> {
        let vectors = self.basis.into_iter().map(state_from_json).collect::<Result<Vec<_>, _>>()?;
        Ok(Observable::new(MeasurementBasis::new(vectors)?, self.values)?)
    }
}

/// A state of an `N × N'` composite, tagged with the factor dimensions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompositeJson {
    #[serde(rename = "N")]
    pub n1: usize,
    #[serde(rename = "N'")]
    pub n2: usize,
    pub state: Vec<Pair>,
}

impl CompositeJson {
    pub fn new(n1: usize, n2: usize, state: &PureState) -> Self {
        Self { n1, n2, state: state_to_json(state) }
    }

    pub fn into_state(self) -> Result<PureState, FormatError> {
        let v = state_from_json(self.state)?;
        if v.n() != self.n1 * self.n2 {
            return Err(igq_core::Error::DimensionMismatch { expected: self.n1 * self.n2, found: v.n() }.into());
        }
        Ok(v)
    }
}

/// `{h, x0, P, S, m}` with an optional potential `V` (zero when absent).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HJStateJson {
    pub h: f64,
    pub x0: f64,
    #[serde(rename = "P")]
    pub p: Vec<f64>,
    #[serde(rename = "S")]
    pub s: Vec<f64>,
    pub m: f64,
    #[serde(rename = "V", default, skip_serializing_if = "Option::is_none")]
    pub v: Option<Vec<f64>>,
}

impl From<&HJGridState> for HJStateJson {
    fn from(st: &HJGridState) -> Self {
        let v = st.potential();
        Self {
            h: st.h(),
            x0: st.x0(),
            p: st.probs().as_slice().to_vec(),
            s: st.action().to_vec(),
            m: st.mass(),
            v: v.iter().any(|&x| x != 0.0).then(|| v.to_vec()),
        }
    }
}

impl HJStateJson {
    pub fn into_state(self) -> Result<HJGridState, FormatError> {
        let p = ProbVec::new(self.p)?;
        let v = self.v.unwrap_or_else(|| vec![0.0; p.len()]);
        Ok(HJGridState::new(self.h, self.x0, p, self.s, self.m, v)?)
    }
}

/// One line of a simulation trial log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialLogEntry {
    pub trial: u64,
    pub result: usize,
    pub output_state: Vec<Pair>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use igq_core::classify::realify_unitary;
    use igq_core::sampling::{haar_unitary, random_state};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn state_round_trip() {
        let v = random_state(3, &mut ChaCha8Rng::seed_from_u64(1));
        let text = serde_json::to_string(&state_to_json(&v)).unwrap();
        let back = state_from_json(serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn probability_vectors_are_plain_arrays() {
        let p = ProbVec::new(vec![0.25, 0.75]).unwrap();
        assert_eq!(serde_json::to_string(&prob_vec_to_json(&p)).unwrap(), "[0.25,0.75]");
        assert!(prob_vec_from_json(vec![0.5, 0.6]).is_err());
    }

    #[test]
    fn gauge_map_tagging() {
        let u = haar_unitary(2, &mut ChaCha8Rng::seed_from_u64(2));
        let g = GaugeMap::antiunitary(u.clone()).unwrap();
        let text = serde_json::to_string(&GaugeMapJson::from(&g)).unwrap();
        assert!(text.starts_with(r#"{"kind":"antiunitary","matrix":[[["#));
        let back: GaugeMapJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.into_gauge_map().unwrap(), g);
    }

    #[test]
    fn ragged_matrices_are_rejected() {
        assert!(matches!(real_matrix_from_json(vec![vec![1.0, 0.0], vec![0.0]]), Err(FormatError::Ragged { .. })));
        let m = realify_unitary(&haar_unitary(2, &mut ChaCha8Rng::seed_from_u64(3))).unwrap();
        let back = real_matrix_from_json(real_matrix_to_json(m.matrix())).unwrap();
        assert_eq!(&back, m.matrix());
    }

    #[test]
    fn composite_metadata() {
        let v = random_state(6, &mut ChaCha8Rng::seed_from_u64(4));
        let text = serde_json::to_string(&CompositeJson::new(2, 3, &v)).unwrap();
        assert!(text.starts_with(r#"{"N":2,"N'":3,"state""#));
        let wrong = CompositeJson { n1: 2, n2: 2, state: state_to_json(&v) };
        assert!(wrong.into_state().is_err());
    }

    #[test]
    fn hj_state_defaults_to_zero_potential() {
        let text = r#"{"h":0.5,"x0":0.0,"P":[0.25,0.25,0.25,0.25],"S":[0,1,2,3],"m":1.0}"#;
        let st = serde_json::from_str::<HJStateJson>(text).unwrap().into_state().unwrap();
        assert_eq!(st.potential(), &[0.0; 4]);
        assert_eq!(serde_json::to_string(&HJStateJson::from(&st)).unwrap(), text.replace("[0,1,2,3]", "[0.0,1.0,2.0,3.0]"));
    }
}
