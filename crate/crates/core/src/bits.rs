//! Small helpers for vertex sets packed into `u64` masks.

pub type VertexMask = u64;

pub fn bit(v: usize) -> VertexMask {
    1u64 << v
}

pub fn full(n: usize) -> VertexMask {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub fn mask_of(vertices: &[usize]) -> VertexMask {
    vertices.iter().fold(0, |m, &v| m | bit(v))
}

pub fn iter(mut mask: VertexMask) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let v = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(v)
        }
    })
}

pub fn to_vec(mask: VertexMask) -> Vec<usize> {
    iter(mask).collect()
}

pub fn lowest(mask: VertexMask) -> Option<usize> {
    (mask != 0).then(|| mask.trailing_zeros() as usize)
}

/// Packs the bits of `mask` selected by `within` into the low bits, keeping order.
pub fn compress(mask: VertexMask, within: VertexMask) -> VertexMask {
    let mut out = 0;
    for (i, v) in iter(within).enumerate() {
        if mask & bit(v) != 0 {
            out |= bit(i);
        }
    }
    out
}

/// Inverse of [`compress`]: spreads the low bits of `local` onto the positions of `within`.
pub fn expand(local: VertexMask, within: VertexMask) -> VertexMask {
    let mut out = 0;
    for (i, v) in iter(within).enumerate() {
        if local & bit(i) != 0 {
            out |= bit(v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compress_expand_roundtrip() {
        let within = mask_of(&[1, 3, 4, 7]);
        let m = mask_of(&[3, 7]);
        let local = compress(m, within);
        assert_eq!(local, 0b1010);
        assert_eq!(expand(local, within), m);
    }

    #[test]
    fn iterate_bits() {
        assert_eq!(to_vec(0b10110), vec![1, 2, 4]);
        assert_eq!(lowest(0), None);
        assert_eq!(full(3), 0b111);
    }
}
