pub mod complex;
pub mod error;
pub mod precision;
pub mod rational;
pub mod series;
pub mod quad;
pub mod report;
pub mod contour;
pub mod euler_sum;
pub mod verify;
