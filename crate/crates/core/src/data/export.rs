use std::fmt;
use std::fs;
use std::io::{BufReader, Cursor};
use std::path::Path;
use std::str::FromStr;

use super::DataError;
use crate::image::{EncodedImage, Grid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ImageFormat {
    /// Binary P5 graymap of the intensities.
    #[default]
    Pgm,
    /// 8-bit single-channel PNG of the intensities.
    Png,
    /// Raw counts, one grid row per line.
    Csv,
}

impl ImageFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ImageFormat::Pgm => "pgm",
            ImageFormat::Png => "png",
            ImageFormat::Csv => "csv",
        }
    }
}

impl fmt::Display for ImageFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.extension())
    }
}

impl FromStr for ImageFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "pgm" => Ok(ImageFormat::Pgm),
            "png" => Ok(ImageFormat::Png),
            "csv" => Ok(ImageFormat::Csv),
            _ => Err(format!("unknown image format {s:?} (expected pgm, png or csv)")),
        }
    }
}

/// Serializes an image to bytes in `format`.
pub fn encode_image_bytes(img: &EncodedImage, format: ImageFormat) -> Result<Vec<u8>, DataError> {
    let side = img.side();
    match format {
        ImageFormat::Pgm => {
            let mut out = format!("P5\n{side} {side}\n255\n").into_bytes();
            out.extend_from_slice(img.intensities.cells());
            Ok(out)
        }
        ImageFormat::Png => {
            let mut out = Vec::new();
            let mut enc = png::Encoder::new(&mut out, side as u32, side as u32);
            enc.set_color(png::ColorType::Grayscale);
            enc.set_depth(png::BitDepth::Eight);
            let mut writer = enc.write_header().map_err(|e| DataError::Image(e.to_string()))?;
            writer
                .write_image_data(img.intensities.cells())
                .map_err(|e| DataError::Image(e.to_string()))?;
            writer.finish().map_err(|e| DataError::Image(e.to_string()))?;
            Ok(out)
        }
        ImageFormat::Csv => {
            let mut out = String::with_capacity(side * side * 2);
            for row in img.counts.rows() {
                let line: Vec<String> = row.iter().map(u32::to_string).collect();
                out.push_str(&line.join(","));
                out.push('\n');
            }
            Ok(out.into_bytes())
        }
    }
}

/// Writes `img` to `path`, creating parent directories as needed.
pub fn write_image(img: &EncodedImage, path: &Path, format: ImageFormat) -> Result<(), DataError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| DataError::io(parent, e))?;
    }
    let bytes = encode_image_bytes(img, format)?;
    fs::write(path, bytes).map_err(|e| DataError::io(path, e))
}

fn image_err(path: &Path, message: impl fmt::Display) -> DataError {
    DataError::Image(format!("{}: {message}", path.display()))
}

/// Decodes a binary P5 graymap with maxval 255.
pub fn decode_pgm(bytes: &[u8]) -> Result<Grid<u8>, String> {
    let mut pos = 0usize;
    let mut fields = Vec::with_capacity(4);
    while fields.len() < 4 {
        // skip whitespace and comments
        while pos < bytes.len() && (bytes[pos].is_ascii_whitespace() || bytes[pos] == b'#') {
            if bytes[pos] == b'#' {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
            } else {
                pos += 1;
            }
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err("truncated header".into());
        }
        fields.push(String::from_utf8_lossy(&bytes[start..pos]).into_owned());
    }
    // exactly one whitespace byte separates the header from the raster
    pos += 1;
    if fields[0] != "P5" {
        return Err(format!("bad magic {:?}", fields[0]));
    }
    let num = |s: &str| s.parse::<usize>().map_err(|_| format!("bad header number {s:?}"));
    let (w, h, maxval) = (num(&fields[1])?, num(&fields[2])?, num(&fields[3])?);
    if maxval != 255 {
        return Err(format!("unsupported maxval {maxval}"));
    }
    if w != h {
        return Err(format!("image is {w}x{h}, not square"));
    }
    let raster = bytes.get(pos..).unwrap_or(&[]);
    if raster.len() != w * h {
        return Err(format!("expected {} raster bytes, found {}", w * h, raster.len()));
    }
    Ok(Grid::from_cells(w, raster.to_vec()).expect("length checked"))
}

pub fn read_pgm(path: &Path) -> Result<Grid<u8>, DataError> {
    let bytes = fs::read(path).map_err(|e| DataError::io(path, e))?;
    decode_pgm(&bytes).map_err(|m| image_err(path, m))
}

pub fn decode_png(bytes: &[u8]) -> Result<Grid<u8>, String> {
    let decoder = png::Decoder::new(BufReader::new(Cursor::new(bytes)));
    let mut reader = decoder.read_info().map_err(|e| e.to_string())?;
    let mut buf = vec![0; reader.output_buffer_size().ok_or("image too large")?];
    let info = reader.next_frame(&mut buf).map_err(|e| e.to_string())?;
    if info.color_type != png::ColorType::Grayscale || info.bit_depth != png::BitDepth::Eight {
        return Err(format!("expected 8-bit grayscale, got {:?} {:?}", info.color_type, info.bit_depth));
    }
    if info.width != info.height {
        return Err(format!("image is {}x{}, not square", info.width, info.height));
    }
    buf.truncate(info.buffer_size());
    Grid::from_cells(info.width as usize, buf).ok_or_else(|| "raster size mismatch".to_string())
}

pub fn read_png(path: &Path) -> Result<Grid<u8>, DataError> {
    let bytes = fs::read(path).map_err(|e| DataError::io(path, e))?;
    decode_png(&bytes).map_err(|m| image_err(path, m))
}

pub fn read_counts_csv(path: &Path) -> Result<Grid<u32>, DataError> {
    let text = fs::read_to_string(path).map_err(|e| DataError::io(path, e))?;
    let mut cells = Vec::new();
    let mut rows = 0usize;
    for line in text.lines().filter(|l| !l.is_empty()) {
        rows += 1;
        for v in line.split(',') {
            cells.push(v.trim().parse::<u32>().map_err(|_| image_err(path, format!("bad count {v:?}")))?);
        }
    }
    Grid::from_cells(rows, cells).ok_or_else(|| image_err(path, "rows are not square"))
}

/// Decodes any exported image by extension. PGM and PNG yield intensities,
/// CSV yields raw counts.
pub fn read_image(path: &Path) -> Result<Grid<u32>, DataError> {
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
    let widen = |g: Grid<u8>| {
        let side = g.side();
        Grid::from_cells(side, g.cells().iter().map(|&v| u32::from(v)).collect()).expect("same size")
    };
    match ext.parse::<ImageFormat>() {
        Ok(ImageFormat::Pgm) => read_pgm(path).map(widen),
        Ok(ImageFormat::Png) => read_png(path).map(widen),
        Ok(ImageFormat::Csv) => read_counts_csv(path),
        Err(_) => Err(image_err(path, "unrecognized image extension")),
    }
}
