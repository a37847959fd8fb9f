//! Data-parallel helpers. With the `parallel` feature the work is spread over
//! the rayon pool unless the caller asks for sequential execution; without it
//! everything runs on the calling thread.

use crate::exact::Rational;
use num_traits::Zero;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Sequential,
    Parallel,
}

impl Default for Mode {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Mode::Parallel
        } else {
            Mode::Sequential
        }
    }
}

pub fn map<T, R, F>(mode: Mode, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode == Mode::Parallel && items.len() > 1 {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = mode;
    items.iter().map(f).collect()
}

pub fn sum<T, F>(mode: Mode, items: &[T], f: F) -> Rational
where
    T: Sync,
    F: Fn(&T) -> Rational + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode == Mode::Parallel && items.len() > 1 {
        use rayon::prelude::*;
        return items
            .par_iter()
            .map(f)
            .reduce(Rational::zero, |a, b| a + b);
    }
    let _ = mode;
    items.iter().map(f).fold(Rational::zero(), |a, b| a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    #[test]
    fn modes_agree() {
        let xs: Vec<i64> = (1..200).collect();
        let a = sum(Mode::Sequential, &xs, |&x| int(x * x));
        let b = sum(Mode::Parallel, &xs, |&x| int(x * x));
        assert_eq!(a, b);
        assert_eq!(map(Mode::Parallel, &xs, |x| x + 1), map(Mode::Sequential, &xs, |x| x + 1));
    }
}
