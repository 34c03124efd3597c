//! Constants of the three reference figures.

use crate::CliError;

/// Amplitude `A·k_F³` used in every figure.
pub const FIGURE_SCALE: f64 = 1e5;

#[derive(Clone, Debug, PartialEq)]
pub struct FigureSpec {
    pub id: u8,
    pub scale: f64,
    /// One curve per value; figure 3 labels them 1, 2, 3.
    pub y_values: Vec<f64>,
    pub r_min: f64,
    pub r_max: f64,
}

impl FigureSpec {
    pub fn reference(id: u8) -> Result<Self, CliError> {
        let (y_values, r_min, r_max) = match id {
            1 => (vec![1e-2], 10.0, 20.0),
            2 => (vec![1e-2], 50.0, 100.0),
            3 => (vec![1e-2, 10f64.powf(-1.5), 1e-1], 10.0, 20.0),
            other => {
                return Err(CliError::Usage(format!(
                    "figure id must be 1, 2 or 3, got {other}"
                )))
            }
        };
        Ok(FigureSpec {
            id,
            scale: FIGURE_SCALE,
            y_values,
            r_min,
            r_max,
        })
    }

    pub fn curve_labels(&self) -> Vec<String> {
        if self.y_values.len() == 1 {
            vec![format!("y = {}", self.y_values[0])]
        } else {
            (1..=self.y_values.len()).map(|i| i.to_string()).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_constants() {
        let f1 = FigureSpec::reference(1).unwrap();
        assert_eq!(
            (f1.scale, f1.y_values.clone(), f1.r_min, f1.r_max),
            (1e5, vec![0.01], 10.0, 20.0)
        );
        let f2 = FigureSpec::reference(2).unwrap();
        assert_eq!(
            (f2.y_values.clone(), f2.r_min, f2.r_max),
            (vec![0.01], 50.0, 100.0)
        );
        let f3 = FigureSpec::reference(3).unwrap();
        assert_eq!(f3.y_values.len(), 3);
        assert_eq!(f3.y_values[1], 10f64.powf(-1.5));
        assert_eq!(f3.curve_labels(), vec!["1", "2", "3"]);
        assert!(FigureSpec::reference(4).is_err());
    }
}
