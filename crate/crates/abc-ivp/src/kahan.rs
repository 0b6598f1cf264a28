/// Kahan-compensated accumulator.
///
/// Keeps the running compensation term so that long sums (Mittag-Leffler
/// series, lag-term assembly over many panels) lose almost no precision.
#[derive(Debug, Clone, Copy, Default)]
pub struct Kahan {
    sum: f64,
    carry: f64,
}

impl Kahan {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// Componentwise Kahan accumulator for short state vectors.
#[derive(Debug, Clone)]
pub struct KahanVec {
    terms: Vec<Kahan>,
}

impl KahanVec {
    pub fn zeros(dim: usize) -> Self {
        Self {
            terms: vec![Kahan::new(); dim],
        }
    }

    /// Accumulate `scale * v` componentwise.
    #[inline]
    pub fn add_scaled(&mut self, scale: f64, v: &[f64]) {
        debug_assert_eq!(v.len(), self.terms.len());
        for (acc, &x) in self.terms.iter_mut().zip(v) {
            acc.add(scale * x);
        }
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.terms.into_iter().map(|k| k.value()).collect()
    }
}
