//! Dense complex matrices stored as separate real and imaginary parts, so
//! products go through the real gemm kernel.

use ndarray::{Array1, Array2, Axis, Zip};

#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    pub re: Array2<f64>,
    pub im: Array2<f64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix { re: Array2::zeros((n, n)), im: Array2::zeros((n, n)) }
    }

    pub fn diag(d: &[f64]) -> Self {
        let mut m = CMatrix::zeros(d.len());
        for (i, x) in d.iter().enumerate() {
            m.re[[i, i]] = *x;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.re.nrows()
    }

    pub fn adjoint(&self) -> Self {
        CMatrix { re: self.re.t().to_owned(), im: self.im.t().mapv(|x| -x) }
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        let re = self.re.dot(&other.re) - self.im.dot(&other.im);
        let im = self.re.dot(&other.im) + self.im.dot(&other.re);
        CMatrix { re, im }
    }

    /// `diag(d) · self`.
    pub fn scale_rows(&mut self, d: &[f64]) {
        let d = Array1::from(d.to_vec());
        let col = d.insert_axis(Axis(1));
        self.re *= &col;
        self.im *= &col;
    }

    /// `self · diag(d)`.
    pub fn scale_cols(&mut self, d: &[f64]) {
        let row = Array1::from(d.to_vec());
        self.re *= &row;
        self.im *= &row;
    }

    /// `self − diag(d)`.
    pub fn sub_diag(&mut self, d: &[f64]) {
        for (i, x) in d.iter().enumerate() {
            self.re[[i, i]] -= x;
        }
    }

    /// Unnormalized trace.
    pub fn trace(&self) -> (f64, f64) {
        (self.re.diag().sum(), self.im.diag().sum())
    }

    /// `Tr(self · other)` without forming the product.
    pub fn trace_of_product(&self, other: &CMatrix) -> (f64, f64) {
        let (mut re, mut im) = (0.0, 0.0);
        Zip::from(&self.re).and(&self.im).and(other.re.t()).and(other.im.t()).for_each(|a, b, c, d| {
            re += a * c - b * d;
            im += a * d + b * c;
        });
        (re, im)
    }

    /// `v · self` for a row vector `v = (re, im)`.
    pub fn row_times(&self, v: &(Array1<f64>, Array1<f64>)) -> (Array1<f64>, Array1<f64>) {
        let re = v.0.dot(&self.re) - v.1.dot(&self.im);
        let im = v.0.dot(&self.im) + v.1.dot(&self.re);
        (re, im)
    }
}
