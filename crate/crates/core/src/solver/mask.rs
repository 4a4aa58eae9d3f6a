use crate::error::{Error, Result};
use crate::tensor::Tensor3;

/// The observed index set `Ω` together with the observed values `G_Ω`.
///
/// Indices are linear offsets into the [`Tensor3`] layout, kept sorted.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationMask {
    dims: (usize, usize, usize),
    indices: Vec<usize>,
    values: Vec<f64>,
    observed: Vec<bool>,
}

impl ObservationMask {
    /// Builds `Ω` from `(i, j, k)` triples and reads `G_Ω` from `g`.
    pub fn from_triples(g: &Tensor3, triples: &[(usize, usize, usize)]) -> Result<Self> {
        let (m, n, p) = g.dims();
        let mut indices = Vec::with_capacity(triples.len());
        for &(i, j, k) in triples {
            if i >= m || j >= n || k >= p {
                return Err(Error::InvalidMask(format!(
                    "triple ({i}, {j}, {k}) outside {m}x{n}x{p}"
                )));
            }
            indices.push(g.index_of(i, j, k));
        }
        Self::from_linear(g, indices)
    }

    /// Builds `Ω` from linear offsets.
    pub fn from_linear(g: &Tensor3, mut indices: Vec<usize>) -> Result<Self> {
        let total = g.len();
        indices.sort_unstable();
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidMask("duplicate observed index".into()));
        }
        if let Some(&last) = indices.last() {
            if last >= total {
                return Err(Error::InvalidMask(format!("index {last} outside tensor of {total}")));
            }
        }
        let mut observed = vec![false; total];
        for &idx in &indices {
            observed[idx] = true;
        }
        let values = indices.iter().map(|&idx| g.as_slice()[idx]).collect();
        Ok(Self {
            dims: g.dims(),
            indices,
            values,
            observed,
        })
    }

    /// `Ω` = entries where `flags` is nonzero.
    pub fn from_indicator(g: &Tensor3, flags: &Tensor3) -> Result<Self> {
        if flags.dims() != g.dims() {
            return Err(Error::InvalidMask(format!(
                "indicator is {:?}, data is {:?}",
                flags.dims(),
                g.dims()
            )));
        }
        let idx = flags
            .as_slice()
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0.0)
            .map(|(i, _)| i)
            .collect();
        Self::from_linear(g, idx)
    }

    /// Every entry observed.
    pub fn full(g: &Tensor3) -> Self {
        Self::from_linear(g, (0..g.len()).collect()).expect("full index set is valid")
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        self.dims
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_observed(&self, linear: usize) -> bool {
        self.observed[linear]
    }

    /// `|Ω| / (m n p)`.
    pub fn sampling_rate(&self) -> f64 {
        self.indices.len() as f64 / self.observed.len() as f64
    }

    pub fn triples(&self) -> Vec<(usize, usize, usize)> {
        let (m, n, _) = self.dims;
        self.indices
            .iter()
            .map(|&idx| (idx % m, (idx / m) % n, idx / (m * n)))
            .collect()
    }

    /// `P_Ω(G)`: observed values, zero elsewhere.
    pub fn observed_tensor(&self) -> Tensor3 {
        let (m, n, p) = self.dims;
        let mut t = Tensor3::zeros(m, n, p);
        self.project(&mut t);
        t
    }

    /// 0/1 indicator tensor of `Ω`.
    pub fn indicator(&self) -> Tensor3 {
        let (m, n, p) = self.dims;
        let data = self.observed.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
        Tensor3::from_vec(m, n, p, data).expect("indicator is finite")
    }

    /// Overwrite observed entries of `c` with `G_Ω`.
    pub fn project(&self, c: &mut Tensor3) {
        let data = c.as_mut_slice();
        for (&idx, &g) in self.indices.iter().zip(&self.values) {
            data[idx] = g;
        }
    }

    /// Largest `|C − G|` over `Ω`.
    pub fn max_violation(&self, c: &Tensor3) -> f64 {
        let data = c.as_slice();
        self.indices
            .iter()
            .zip(&self.values)
            .fold(0.0f64, |acc, (&idx, &g)| acc.max((data[idx] - g).abs()))
    }

    pub fn is_feasible(&self, c: &Tensor3) -> bool {
        c.dims() == self.dims && self.max_violation(c) == 0.0
    }
}
