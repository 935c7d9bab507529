//! Byte-level ULog writer for building test inputs by hand.

const MAGIC: [u8; 7] = [0x55, 0x4C, 0x6F, 0x67, 0x01, 0x12, 0x35];
const SYNC: [u8; 8] = [0x2F, 0x73, 0x13, 0x20, 0x25, 0x0C, 0xBB, 0x12];

/// Appends records to an in-memory ULog stream.
#[derive(Debug, Clone)]
pub struct ULogWriter {
    buf: Vec<u8>,
}

impl ULogWriter {
    /// Header with version 1 and the given logger start time.
    pub fn new(start_us: u64) -> Self {
        let mut buf = MAGIC.to_vec();
        buf.push(1);
        buf.extend_from_slice(&start_us.to_le_bytes());
        Self { buf }
    }

    pub fn record(&mut self, msg_type: u8, payload: &[u8]) -> &mut Self {
        let size = u16::try_from(payload.len()).expect("record payload over 65535 bytes");
        self.buf.extend_from_slice(&size.to_le_bytes());
        self.buf.push(msg_type);
        self.buf.extend_from_slice(payload);
        self
    }

    pub fn flag_bits(&mut self, compat: [u8; 8], incompat: [u8; 8], offsets: [u64; 3]) -> &mut Self {
        let mut p = Vec::with_capacity(40);
        p.extend_from_slice(&compat);
        p.extend_from_slice(&incompat);
        for o in offsets {
            p.extend_from_slice(&o.to_le_bytes());
        }
        self.record(b'B', &p)
    }

    /// `def` is the literal definition, e.g. `"gps:uint64_t timestamp;int32_t lat;"`.
    pub fn format(&mut self, def: &str) -> &mut Self {
        self.record(b'F', def.as_bytes())
    }

    fn keyed(type_key: &str, value: &[u8]) -> Vec<u8> {
        let mut p = vec![type_key.len() as u8];
        p.extend_from_slice(type_key.as_bytes());
        p.extend_from_slice(value);
        p
    }

    pub fn info_str(&mut self, key: &str, value: &str) -> &mut Self {
        let p = Self::keyed(&format!("char[{}] {key}", value.len()), value.as_bytes());
        self.record(b'I', &p)
    }

    pub fn info_raw(&mut self, type_key: &str, value: &[u8]) -> &mut Self {
        let p = Self::keyed(type_key, value);
        self.record(b'I', &p)
    }

    pub fn info_multiple(&mut self, continued: bool, key: &str, value: &str) -> &mut Self {
        let mut p = vec![continued as u8];
        p.extend(Self::keyed(&format!("char[{}] {key}", value.len()), value.as_bytes()));
        self.record(b'M', &p)
    }

    pub fn param_i32(&mut self, name: &str, value: i32) -> &mut Self {
        let p = Self::keyed(&format!("int32_t {name}"), &value.to_le_bytes());
        self.record(b'P', &p)
    }

    pub fn param_f32(&mut self, name: &str, value: f32) -> &mut Self {
        let p = Self::keyed(&format!("float {name}"), &value.to_le_bytes());
        self.record(b'P', &p)
    }

    pub fn param_default_f32(&mut self, types: u8, name: &str, value: f32) -> &mut Self {
        let mut p = vec![types];
        p.extend(Self::keyed(&format!("float {name}"), &value.to_le_bytes()));
        self.record(b'Q', &p)
    }

    pub fn subscribe(&mut self, msg_id: u16, multi_id: u8, name: &str) -> &mut Self {
        let mut p = vec![multi_id];
        p.extend_from_slice(&msg_id.to_le_bytes());
        p.extend_from_slice(name.as_bytes());
        self.record(b'A', &p)
    }

    pub fn data(&mut self, msg_id: u16, payload: &[u8]) -> &mut Self {
        let mut p = Vec::with_capacity(payload.len() + 2);
        p.extend_from_slice(&msg_id.to_le_bytes());
        p.extend_from_slice(payload);
        self.record(b'D', &p)
    }

    /// `level` is the ASCII level digit, `b'0'` (emergency) to `b'7'` (debug).
    pub fn logging(&mut self, level: u8, timestamp_us: u64, text: &str) -> &mut Self {
        let mut p = vec![level];
        p.extend_from_slice(&timestamp_us.to_le_bytes());
        p.extend_from_slice(text.as_bytes());
        self.record(b'L', &p)
    }

    pub fn logging_tagged(&mut self, level: u8, tag: u16, timestamp_us: u64, text: &str) -> &mut Self {
        let mut p = vec![level];
        p.extend_from_slice(&tag.to_le_bytes());
        p.extend_from_slice(&timestamp_us.to_le_bytes());
        p.extend_from_slice(text.as_bytes());
        self.record(b'C', &p)
    }

    pub fn dropout(&mut self, duration_ms: u16) -> &mut Self {
        self.record(b'O', &duration_ms.to_le_bytes())
    }

    pub fn sync(&mut self) -> &mut Self {
        self.record(b'S', &SYNC)
    }

    pub fn raw(&mut self, bytes: &[u8]) -> &mut Self {
        self.buf.extend_from_slice(bytes);
        self
    }

    pub fn len(&self) -> usize {
        self.buf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.buf.is_empty()
    }

    pub fn bytes(&self) -> &[u8] {
        &self.buf
    }

    pub fn finish(self) -> Vec<u8> {
        self.buf
    }
}

/// Little-endian payload builder for data records.
#[derive(Debug, Clone, Default)]
pub struct Fields(Vec<u8>);

impl Fields {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn u8(mut self, v: u8) -> Self {
        self.0.push(v);
        self
    }

    pub fn i8(self, v: i8) -> Self {
        self.u8(v as u8)
    }

    pub fn u16(mut self, v: u16) -> Self {
        self.0.extend_from_slice(&v.to_le_bytes());
        self
    }

    pub fn i16(mut self, v: i16) -> Self {
        self.0.extend_from_slice(&v.to_le_bytes());
        self
    }

    pub fn u32(mut self, v: u32) -> Self {
        self.0.extend_from_slice(&v.to_le_bytes());
        self
    }

    pub fn i32(mut self, v: i32) -> Self {
        self.0.extend_from_slice(&v.to_le_bytes());
        self
    }

    pub fn u64(mut self, v: u64) -> Self {
        self.0.extend_from_slice(&v.to_le_bytes());
        self
    }

    pub fn i64(mut self, v: i64) -> Self {
        self.0.extend_from_slice(&v.to_le_bytes());
        self
    }

    pub fn f32(mut self, v: f32) -> Self {
        self.0.extend_from_slice(&v.to_le_bytes());
        self
    }

    pub fn f64(mut self, v: f64) -> Self {
        self.0.extend_from_slice(&v.to_le_bytes());
        self
    }

    pub fn pad(mut self, n: usize) -> Self {
        self.0.resize(self.0.len() + n, 0);
        self
    }

    pub fn build(self) -> Vec<u8> {
        self.0
    }
}
