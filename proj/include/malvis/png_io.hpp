#pragma once

#include <csetjmp>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <png.h>

#include "malvis/error.hpp"
#include "malvis/imagegen.hpp"

namespace malvis {

/// Reads any PNG and converts it to 8-bit grayscale.
inline GrayscaleImage read_png(const std::filesystem::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.string().c_str()))
    throw Error("cannot read PNG " + path.string() + ": " + image.message);
  image.format = PNG_FORMAT_GRAY;

  GrayscaleImage img{image.width, image.height, std::vector<std::uint8_t>(PNG_IMAGE_SIZE(image))};
  if (!png_image_finish_read(&image, nullptr, img.pixels.data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw Error("cannot decode PNG " + path.string() + ": " + msg);
  }
  return img;
}

/// Writes an 8-bit grayscale PNG.
inline void write_png(const GrayscaleImage& img, const std::filesystem::path& path) {
  if (!img.valid()) throw Error("cannot write an invalid image to " + path.string());
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width);
  image.height = static_cast<png_uint_32>(img.height);
  image.format = PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&image, path.string().c_str(), 0, img.pixels.data(), 0, nullptr))
    throw Error("cannot write PNG " + path.string() + ": " + image.message);
}

/// Writes a 1-bit grayscale PNG; nonzero entries of `bits` become white.
inline void write_png_1bit(std::size_t width, std::size_t height, const std::vector<std::uint8_t>& bits,
                           const std::filesystem::path& path) {
  if (width == 0 || height == 0 || bits.size() != width * height)
    throw Error("cannot write an invalid bit matrix to " + path.string());

  std::unique_ptr<std::FILE, int (*)(std::FILE*)> fp(std::fopen(path.string().c_str(), "wb"), &std::fclose);
  if (!fp) throw Error("cannot write " + path.string());

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw Error("libpng initialisation failed");
  }

  std::vector<std::vector<png_byte>> rows(height, std::vector<png_byte>((width + 7) / 8, 0));
  for (std::size_t r = 0; r < height; ++r)
    for (std::size_t c = 0; c < width; ++c)
      if (bits[r * width + c]) rows[r][c / 8] |= static_cast<png_byte>(0x80u >> (c % 8));
  std::vector<png_bytep> row_ptrs(height);
  for (std::size_t r = 0; r < height; ++r) row_ptrs[r] = rows[r].data();

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error("cannot encode PNG " + path.string());
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 1, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, row_ptrs.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace malvis
