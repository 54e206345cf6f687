//! MSB-first bit packing used by the wire formats and message chunking.
//!
//! Fields are written most-significant-bit first, so a 5 in a 4-bit field
//! occupies the bits `0101` in stream order. The final byte of a stream is
//! zero-padded on the right.

/// Accumulates variable-width fields into a byte buffer.
#[derive(Debug, Default)]
pub(crate) struct BitWriter {
    buf: Vec<u8>,
    /// Bits already used in the final byte of `buf` (0 when byte-aligned).
    partial: u32,
}

impl BitWriter {
    #[cfg(test)]
    pub(crate) fn new() -> Self {
        Self::default()
    }

    pub(crate) fn with_capacity_bits(bits: u64) -> Self {
        BitWriter { buf: Vec::with_capacity(bits.div_ceil(8) as usize), partial: 0 }
    }

    /// Appends the low `width` bits of `value`, most significant first.
    /// `width` must be at most 64 and `value` must fit in `width` bits.
    pub(crate) fn write(&mut self, value: u64, width: u32) {
        debug_assert!(width <= 64);
        debug_assert!(width == 64 || value < (1u64 << width));
        let mut remaining = width;
        while remaining > 0 {
            if self.partial == 0 {
                self.buf.push(0);
            }
            let free = 8 - self.partial;
            let take = free.min(remaining);
            let chunk = ((value >> (remaining - take)) & ((1u64 << take) - 1)) as u8;
            let last = self.buf.last_mut().expect("buffer is non-empty after push");
            *last |= chunk << (free - take);
            self.partial = (self.partial + take) % 8;
            remaining -= take;
        }
    }

    /// Pads the current byte with zeros and returns the buffer.
    pub(crate) fn finish(self) -> Vec<u8> {
        self.buf
    }

    /// Total bits written so far.
    #[cfg(test)]
    pub(crate) fn bit_len(&self) -> u64 {
        if self.partial == 0 {
            self.buf.len() as u64 * 8
        } else {
            (self.buf.len() as u64 - 1) * 8 + u64::from(self.partial)
        }
    }
}

/// Reads variable-width fields from a byte slice.
#[derive(Debug)]
pub(crate) struct BitReader<'a> {
    data: &'a [u8],
    /// Absolute bit cursor.
    pos: u64,
}

impl<'a> BitReader<'a> {
    pub(crate) fn new(data: &'a [u8]) -> Self {
        BitReader { data, pos: 0 }
    }

    pub(crate) fn remaining_bits(&self) -> u64 {
        self.data.len() as u64 * 8 - self.pos
    }

    /// Reads a `width`-bit field (MSB first). Returns `None` if fewer than
    /// `width` bits remain.
    pub(crate) fn read(&mut self, width: u32) -> Option<u64> {
        debug_assert!(width <= 64);
        if self.remaining_bits() < u64::from(width) {
            return None;
        }
        let mut value = 0u64;
        let mut remaining = width;
        while remaining > 0 {
            let byte = self.data[(self.pos / 8) as usize];
            let offset = (self.pos % 8) as u32;
            let avail = 8 - offset;
            let take = avail.min(remaining);
            let chunk = (byte >> (avail - take)) & ((1u16 << take) - 1) as u8;
            value = (value << take) | u64::from(chunk);
            self.pos += u64::from(take);
            remaining -= take;
        }
        Some(value)
    }

    /// Like [`BitReader::read`], but treats bits past the end of the data as
    /// zero. Used to chunk plaintexts whose length is not a multiple of the
    /// block width.
    pub(crate) fn read_padded(&mut self, width: u32) -> u64 {
        let avail = self.remaining_bits().min(u64::from(width)) as u32;
        if avail == 0 {
            return 0;
        }
        let head = self.read(avail).expect("availability was just checked");
        head << (width - avail)
    }
}
