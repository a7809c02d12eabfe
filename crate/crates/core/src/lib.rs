pub mod adversaries;
pub mod analysis;
pub mod engine;
pub mod report;
pub mod acceptance;
pub mod protocols;
pub mod quantum;
pub mod stats;
pub mod types;

#[cfg(test)]
mod probe {
    use nalgebra::{Complex, DMatrix};

    #[test]
    fn hermitian_eigen_probe() {
        let i = Complex::new(0.0, 1.0);
        let one = Complex::new(1.0, 0.0);
        // Hermitian: [[2, i], [-i, 2]] has eigenvalues 1 and 3.
        let m = DMatrix::from_row_slice(2, 2, &[one * 2.0, i, -i, one * 2.0]);
        let eig = m.clone().symmetric_eigen();
        let mut vals: Vec<f64> = eig.eigenvalues.iter().cloned().collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((vals[0] - 1.0).abs() < 1e-12, "{vals:?}");
        assert!((vals[1] - 3.0).abs() < 1e-12, "{vals:?}");
        // Reconstruction
        let recon = eig.recompose();
        assert!((recon - m).norm() < 1e-12);
    }
}
