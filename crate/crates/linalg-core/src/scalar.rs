use nalgebra::{DMatrix, RealField};
use num_traits::FromPrimitive;

pub use nalgebra::Complex;

/// Real scalar the whole stack is generic over (`f32` or `f64`).
pub trait Real: RealField + FromPrimitive + Copy + Send + Sync + 'static {
    /// Convert an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    fn to_f64_lossy(self) -> f64;
}

macro_rules! impl_real {
    ($($t:ty),*) => {$(
        impl Real for $t {
            fn to_f64_lossy(self) -> f64 {
                self as f64
            }
        }
    )*};
}
impl_real!(f32, f64);

pub type CMat<T> = DMatrix<Complex<T>>;

pub fn c<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

/// Complex number from a real `f64` literal.
pub fn cr<T: Real>(re: f64) -> Complex<T> {
    Complex::new(T::lit(re), T::zero())
}
