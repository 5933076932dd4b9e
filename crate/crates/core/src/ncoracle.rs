//! Brute-force moments from non-crossing partitions.
//!
//! A moment `E[x b_1 x ... b_n x]` is the sum over non-crossing partitions of
//! the letters of nested cumulant evaluations: an interval block is evaluated
//! on the spacers it encloses, the value is absorbed into the neighbouring
//! spacers, and the block is removed. For a product `xy` only blocks of a
//! single colour contribute, since mixed cumulants of free variables vanish.
//!
//! Nothing here touches the series recursions; the only shared pieces are the
//! algebra arithmetic and the coefficient layout of the cumulant tensors.

use num_complex::Complex64;

use crate::algebra::{AlgebraContext, AlgebraElement};
use crate::error::{Error, Result};
use crate::mfs::{MultiSeries, MultilinearMap};

/// Largest ground set the oracle will enumerate.
pub const MAX_GROUND_SET: usize = 10;

/// A set partition of `{0, ..., size-1}` (letters are zero-based here).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NCPartition {
    size: usize,
    blocks: Vec<Vec<usize>>,
}

impl NCPartition {
    /// Builds a partition and checks that the blocks cover the ground set
    /// exactly once. Crossing is not checked here; see [`Self::is_non_crossing`].
    pub fn new(size: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; size];
        for b in &mut blocks {
            if b.is_empty() {
                return Err(Error::Shape("empty block".into()));
            }
            b.sort_unstable();
            for &i in b.iter() {
                if i >= size || seen[i] {
                    return Err(Error::Shape(format!("bad or repeated index {i}")));
                }
                seen[i] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Shape("blocks do not cover the ground set".into()));
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(Self { size, blocks })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Quadruple scan for `a < b < c < d` with `a, c` and `b, d` in two
    /// different blocks.
    pub fn is_non_crossing(&self) -> bool {
        let label = self.labels();
        let m = self.size;
        for a in 0..m {
            for b in a + 1..m {
                if label[b] == label[a] {
                    continue;
                }
                for c in b + 1..m {
                    if label[c] != label[a] {
                        continue;
                    }
                    for d in c + 1..m {
                        if label[d] == label[b] {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    fn labels(&self) -> Vec<usize> {
        let mut label = vec![0; self.size];
        for (k, b) in self.blocks.iter().enumerate() {
            for &i in b {
                label[i] = k;
            }
        }
        label
    }
}

/// All non-crossing partitions of an `m`-element set, `1 <= m <= 10`.
///
/// Restricted growth strings are extended one letter at a time; joining the
/// new letter `k` to a block whose last letter is `l` is rejected when some
/// letter strictly between `l` and `k` belongs to a block that started before
/// `l`.
pub fn enumerate_nc(m: usize) -> Result<Vec<NCPartition>> {
    if m == 0 || m > MAX_GROUND_SET {
        return Err(Error::SizeLimitExceeded {
            size: m,
            limit: MAX_GROUND_SET,
        });
    }
    let mut out = Vec::new();
    let mut labels = Vec::with_capacity(m);
    let mut firsts: Vec<usize> = Vec::new();
    let mut lasts: Vec<usize> = Vec::new();
    grow(m, &mut labels, &mut firsts, &mut lasts, &mut out);
    Ok(out)
}

fn grow(
    m: usize,
    labels: &mut Vec<usize>,
    firsts: &mut Vec<usize>,
    lasts: &mut Vec<usize>,
    out: &mut Vec<NCPartition>,
) {
    let k = labels.len();
    if k == m {
        let mut blocks = vec![Vec::new(); firsts.len()];
        for (i, &b) in labels.iter().enumerate() {
            blocks[b].push(i);
        }
        out.push(NCPartition { size: m, blocks });
        return;
    }
    for b in 0..firsts.len() {
        let l = lasts[b];
        let crosses = (l + 1..k).any(|j| firsts[labels[j]] < l);
        if crosses {
            continue;
        }
        labels.push(b);
        lasts[b] = k;
        grow(m, labels, firsts, lasts, out);
        lasts[b] = l;
        labels.pop();
    }
    labels.push(firsts.len());
    firsts.push(k);
    lasts.push(k);
    grow(m, labels, firsts, lasts, out);
    lasts.pop();
    firsts.pop();
    labels.pop();
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Color {
    X,
    Y,
}

/// Letters coloured by variable, with the spacer elements between them.
#[derive(Debug, Clone, PartialEq)]
pub struct ColoredWord {
    colors: Vec<Color>,
    spacers: Vec<AlgebraElement>,
}

impl ColoredWord {
    pub fn new(colors: Vec<Color>, spacers: Vec<AlgebraElement>) -> Result<Self> {
        if colors.is_empty() || spacers.len() + 1 != colors.len() {
            return Err(Error::Shape(format!(
                "{} letters need {} spacers, got {}",
                colors.len(),
                colors.len().saturating_sub(1),
                spacers.len()
            )));
        }
        Ok(Self { colors, spacers })
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    pub fn spacers(&self) -> &[AlgebraElement] {
        &self.spacers
    }
}

/// Which interval block to eliminate first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PickRule {
    LeftmostInnermost,
    RightmostInnermost,
}

/// Coefficient-level evaluation of a cumulant component, summing over all
/// index tuples with nonzero weight.
fn eval_cumulant(map: &MultilinearMap, args: &[AlgebraElement]) -> Result<AlgebraElement> {
    let ctx = *map.context();
    let dim = ctx.dim();
    let inner = map.inner_len();
    let coeffs = map.coeffs();
    let mut out = vec![Complex64::new(0.0, 0.0); dim];

    #[allow(clippy::too_many_arguments)]
    fn walk(
        args: &[AlgebraElement],
        slot: usize,
        flat: usize,
        weight: Complex64,
        dim: usize,
        inner: usize,
        coeffs: &[Complex64],
        out: &mut [Complex64],
    ) {
        if slot == args.len() {
            for (o, acc) in out.iter_mut().enumerate() {
                *acc += weight * coeffs[o * inner + flat];
            }
            return;
        }
        for (i, a) in args[slot].coeffs().iter().enumerate() {
            if a.re == 0.0 && a.im == 0.0 {
                continue;
            }
            walk(args, slot + 1, flat * dim + i, weight * a, dim, inner, coeffs, out);
        }
    }

    walk(args, 0, 0, Complex64::new(1.0, 0.0), dim, inner, coeffs, &mut out);
    ctx.element(out)
}

/// Nested evaluation of one partition on a word, eliminating the leftmost
/// interval block first. Blocks mixing colours make the term vanish.
pub fn evaluate_partition(
    partition: &NCPartition,
    word: &ColoredWord,
    c_x: &MultiSeries,
    c_y: &MultiSeries,
) -> Result<AlgebraElement> {
    evaluate_partition_with(partition, word, c_x, c_y, PickRule::LeftmostInnermost)
}

pub fn evaluate_partition_with(
    partition: &NCPartition,
    word: &ColoredWord,
    c_x: &MultiSeries,
    c_y: &MultiSeries,
    rule: PickRule,
) -> Result<AlgebraElement> {
    let ctx = *c_x.context();
    ctx.check(c_y.context())?;
    if partition.size != word.len() {
        return Err(Error::Shape(format!(
            "partition of {} letters applied to a word of {}",
            partition.size,
            word.len()
        )));
    }
    for b in &partition.blocks {
        let c = word.colors[b[0]];
        if b.iter().any(|&i| word.colors[i] != c) {
            return Ok(ctx.zero());
        }
    }

    let label = partition.labels();
    let mut letters: Vec<usize> = (0..word.len()).collect();
    let mut gaps: Vec<AlgebraElement> = word.spacers.clone();
    let mut prefix = ctx.unit();
    let mut suffix = ctx.unit();

    loop {
        let len = letters.len();
        let is_interval = |s: usize| -> bool {
            let block = &partition.blocks[label[letters[s]]];
            letters[s] == block[0]
                && s + block.len() <= len
                && letters[s..s + block.len()] == block[..]
        };
        let s = match rule {
            PickRule::LeftmostInnermost => (0..len).find(|&s| is_interval(s)),
            PickRule::RightmostInnermost => (0..len).rev().find(|&s| is_interval(s)),
        }
        .expect("a non-crossing partition always has an interval block");
        let r = partition.blocks[label[letters[s]]].len();

        let series = match word.colors[letters[s]] {
            Color::X => c_x,
            Color::Y => c_y,
        };
        if r - 1 > series.order() {
            return Err(Error::DegreeOutOfRange {
                degree: r - 1,
                order: series.order(),
            });
        }
        let value = eval_cumulant(series.component(r - 1), &gaps[s..s + r - 1])?;

        let has_left = s > 0;
        let has_right = s + r < len;
        match (has_left, has_right) {
            (true, true) => {
                let merged = gaps[s - 1].mul(&value)?.mul(&gaps[s + r - 1])?;
                gaps.splice(s - 1..s + r, std::iter::once(merged));
            }
            (false, true) => {
                prefix = prefix.mul(&value)?.mul(&gaps[r - 1])?;
                gaps.drain(0..r);
            }
            (true, false) => {
                suffix = gaps[s - 1].mul(&value)?.mul(&suffix)?;
                gaps.drain(s - 1..);
            }
            (false, false) => return prefix.mul(&value)?.mul(&suffix),
        }
        letters.drain(s..s + r);
    }
}

fn sum_over<F>(ctx: AlgebraContext, partitions: &[NCPartition], mut f: F) -> Result<AlgebraElement>
where
    F: FnMut(&NCPartition) -> Result<AlgebraElement>,
{
    let mut acc = ctx.zero();
    for p in partitions {
        acc = acc.add(&f(p)?)?;
    }
    Ok(acc)
}

/// Degree-`n` moments `E[x b_1 x ... b_n x]` as a sum over `NC(n+1)`,
/// assembled basis tuple by basis tuple.
pub fn oracle_moments(c: &MultiSeries, n: usize) -> Result<MultilinearMap> {
    let ctx = *c.context();
    let partitions = enumerate_nc(n + 1)?;
    MultilinearMap::from_basis_fn(ctx, n, |idx| {
        let spacers = idx.iter().map(|&i| ctx.basis(i)).collect();
        let word = ColoredWord::new(vec![Color::X; n + 1], spacers)?;
        sum_over(ctx, &partitions, |p| evaluate_partition(p, &word, c, c))
    })
}

/// Degree-`n` moments `E[xy b_1 xy ... b_n xy]` over the alternating word of
/// length `2(n+1)`, keeping only monochromatic partitions.
pub fn product_moments(c_x: &MultiSeries, c_y: &MultiSeries, n: usize) -> Result<MultilinearMap> {
    let ctx = *c_x.context();
    ctx.check(c_y.context())?;
    let m = 2 * (n + 1);
    let partitions: Vec<NCPartition> = enumerate_nc(m)?
        .into_iter()
        .filter(|p| {
            p.blocks
                .iter()
                .all(|b| b.iter().all(|&i| i % 2 == b[0] % 2))
        })
        .collect();
    let colors: Vec<Color> = (0..m)
        .map(|i| if i % 2 == 0 { Color::X } else { Color::Y })
        .collect();
    MultilinearMap::from_basis_fn(ctx, n, |idx| {
        let spacers = (0..m - 1)
            .map(|g| {
                if g % 2 == 0 {
                    ctx.unit()
                } else {
                    ctx.basis(idx[g / 2])
                }
            })
            .collect();
        let word = ColoredWord::new(colors.clone(), spacers)?;
        sum_over(ctx, &partitions, |p| evaluate_partition(p, &word, c_x, c_y))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn catalan(m: usize) -> usize {
        let mut c = 1usize;
        for i in 0..m {
            c = c * 2 * (2 * i + 1) / (i + 2);
        }
        c
    }

    // Every set partition via restricted growth strings, unfiltered.
    fn all_partitions(m: usize) -> Vec<NCPartition> {
        fn rec(m: usize, labels: &mut Vec<usize>, max: usize, out: &mut Vec<NCPartition>) {
            if labels.len() == m {
                let mut blocks = vec![Vec::new(); max];
                for (i, &b) in labels.iter().enumerate() {
                    blocks[b].push(i);
                }
                out.push(NCPartition::new(m, blocks).unwrap());
                return;
            }
            for b in 0..=max {
                labels.push(b);
                rec(m, labels, max.max(b + 1), out);
                labels.pop();
            }
        }
        let mut out = Vec::new();
        rec(m, &mut Vec::new(), 0, &mut out);
        out
    }

    #[test]
    fn counts_are_catalan() {
        assert_eq!(enumerate_nc(1).unwrap().len(), 1);
        assert_eq!(enumerate_nc(3).unwrap().len(), 5);
        assert_eq!(enumerate_nc(4).unwrap().len(), 14);
        for m in 1..=8 {
            assert_eq!(enumerate_nc(m).unwrap().len(), catalan(m));
        }
    }

    #[test]
    fn enumeration_matches_filtered_brute_force() {
        for m in 1..=7 {
            let mut brute: Vec<_> = all_partitions(m)
                .into_iter()
                .filter(|p| p.is_non_crossing())
                .map(|p| p.blocks)
                .collect();
            let mut fast: Vec<_> = enumerate_nc(m)
                .unwrap()
                .into_iter()
                .inspect(|p| assert!(p.is_non_crossing()))
                .map(|p| NCPartition::new(m, p.blocks).unwrap().blocks)
                .collect();
            brute.sort();
            fast.sort();
            assert_eq!(brute, fast, "m = {m}");
        }
    }

    #[test]
    fn size_guard() {
        assert!(matches!(
            enumerate_nc(11),
            Err(Error::SizeLimitExceeded { size: 11, limit: 10 })
        ));
        assert!(enumerate_nc(0).is_err());
    }

    #[test]
    fn crossing_detected() {
        let p = NCPartition::new(4, vec![vec![0, 2], vec![1, 3]]).unwrap();
        assert!(!p.is_non_crossing());
        let q = NCPartition::new(4, vec![vec![0, 3], vec![1, 2]]).unwrap();
        assert!(q.is_non_crossing());
        assert!(NCPartition::new(3, vec![vec![0, 1]]).is_err());
        assert!(NCPartition::new(2, vec![vec![0, 1], vec![1]]).is_err());
    }

    fn sample_cumulants(ctx: AlgebraContext) -> MultiSeries {
        let mean = ctx
            .element(vec![
                Complex64::new(1.0, 0.2),
                Complex64::new(0.3, 0.0),
                Complex64::new(0.0, -0.4),
                Complex64::new(0.7, 0.1),
            ])
            .unwrap();
        let mut comps = vec![MultilinearMap::constant(&mean)];
        comps.push(
            MultilinearMap::from_basis_fn(ctx, 1, |idx| {
                Ok(ctx
                    .basis(3 - idx[0])
                    .scale(Complex64::new(0.5, idx[0] as f64 * 0.1)))
            })
            .unwrap(),
        );
        MultiSeries::from_components(ctx, comps).unwrap()
    }

    #[test]
    fn single_letter_and_pair_words() {
        let ctx = AlgebraContext::new(2);
        let c = sample_cumulants(ctx);
        let single = ColoredWord::new(vec![Color::X], vec![]).unwrap();
        let p1 = NCPartition::new(1, vec![vec![0]]).unwrap();
        assert_eq!(
            evaluate_partition(&p1, &single, &c, &c).unwrap(),
            c.constant_term()
        );

        let b = ctx.matrix_unit(1, 0);
        let word = ColoredWord::new(vec![Color::X, Color::X], vec![b.clone()]).unwrap();
        let joint = NCPartition::new(2, vec![vec![0, 1]]).unwrap();
        let split = NCPartition::new(2, vec![vec![0], vec![1]]).unwrap();
        assert_eq!(
            evaluate_partition(&joint, &word, &c, &c).unwrap(),
            c.evaluate(1, std::slice::from_ref(&b)).unwrap()
        );
        let mean = c.constant_term();
        assert!(evaluate_partition(&split, &word, &c, &c)
            .unwrap()
            .approx_eq(&mean.mul(&b).unwrap().mul(&mean).unwrap(), 1e-15)
            .unwrap());

        let mixed = ColoredWord::new(vec![Color::X, Color::Y], vec![ctx.unit()]).unwrap();
        assert_eq!(
            evaluate_partition(&joint, &mixed, &c, &c).unwrap(),
            ctx.zero()
        );
    }

    #[test]
    fn oracle_low_degrees() {
        let ctx = AlgebraContext::new(2);
        let c = sample_cumulants(ctx);
        assert_eq!(
            oracle_moments(&c, 0).unwrap().as_constant(),
            c.constant_term()
        );
        let m1 = oracle_moments(&c, 1).unwrap();
        let mean = c.constant_term();
        for k in 0..4 {
            let b = ctx.basis(k);
            let expected = c
                .evaluate(1, std::slice::from_ref(&b))
                .unwrap()
                .add(&mean.mul(&b).unwrap().mul(&mean).unwrap())
                .unwrap();
            assert!(m1.evaluate(&[b]).unwrap().approx_eq(&expected, 1e-15).unwrap());
        }
    }

    #[test]
    fn scalar_catalan_moment() {
        let ctx = AlgebraContext::new(1);
        let c = MultiSeries::from_components(
            ctx,
            (0..=3)
                .map(|n| MultilinearMap::from_coeffs(ctx, n, vec![Complex64::new(1.0, 0.0)]).unwrap())
                .collect(),
        )
        .unwrap();
        let m3 = oracle_moments(&c, 3).unwrap();
        assert_eq!(m3.coeffs()[0], Complex64::new(14.0, 0.0));
    }

    #[test]
    fn product_degree_zero() {
        let ctx = AlgebraContext::new(2);
        let c_x = sample_cumulants(ctx);
        let c_y = MultiSeries::constant(&ctx.diag(&[Complex64::new(2.0, 0.0), Complex64::new(0.0, 1.0)]), 1);
        let m0 = product_moments(&c_x, &c_y, 0).unwrap().as_constant();
        let expected = c_x.constant_term().mul(&c_y.constant_term()).unwrap();
        assert!(m0.approx_eq(&expected, 1e-15).unwrap());
        // of the two partitions of {x, y} only the split one survives
        let nc2 = enumerate_nc(2).unwrap();
        assert_eq!(nc2.len(), 2);
        assert_eq!(
            nc2.iter()
                .filter(|p| p.blocks().iter().all(|b| b.iter().all(|&i| i % 2 == b[0] % 2)))
                .count(),
            1
        );
        assert!(matches!(
            product_moments(&c_x, &c_y, 5),
            Err(Error::SizeLimitExceeded { .. })
        ));
    }
}
