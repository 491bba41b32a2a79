#pragma once

// Synthetic end-to-end inputs: three small dwellings with floor plans in all
// three accepted encodings, interior masks, metadata, and a run config.

#include <algorithm>
#include <filesystem>
#include <string>
#include <vector>

#include "openness/image_io.hpp"
#include "openness/mask.hpp"
#include "openness/table.hpp"

namespace openness::testkit {

inline constexpr double kFixtureMetersPerPixel = 0.05;

/// Rectangle of room pixels inside a one-pixel wall.
inline std::string boxed_plan(int inner_w, int inner_h) {
  std::string out;
  for (int y = 0; y < inner_h + 2; ++y) {
    for (int x = 0; x < inner_w + 2; ++x) {
      const bool edge = x == 0 || y == 0 || x == inner_w + 1 || y == inner_h + 1;
      out.push_back(edge ? '#' : '.');
    }
    out.push_back('\n');
  }
  return out;
}

/// Two rooms joined by a door in a two-pixel partition.
inline std::string two_room_plan() {
  std::string out;
  const int w = 34, h = 22;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      char c = '.';
      if (x == 0 || y == 0 || x == w - 1 || y == h - 1) c = '#';
      if (x == 14 || x == 15) c = (y >= 8 && y < 12) ? 'D' : '#';
      if (y == 0 && x >= 4 && x < 10) c = 'W';
      out.push_back(c);
    }
    out.push_back('\n');
  }
  return out;
}

/// L-shaped dwelling with outside space in one corner and a window run.
inline std::string l_shaped_plan() {
  std::string out;
  const int w = 30, h = 30;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      char c;
      if (x > 16 && y > 16) {
        c = ' ';
      } else if (x == 0 || y == 0 || x == w - 1 || y == h - 1 || (x == 16 && y >= 16) || (y == 16 && x >= 16)) {
        c = (x == w - 1 && y >= 4 && y < 12) ? 'W' : '#';
      } else {
        c = '.';
      }
      out.push_back(c);
    }
    out.push_back('\n');
  }
  return out;
}

inline std::string all_wall_plan() {
  return std::string(12, '#') + "\n" + std::string(12, '#') + "\n" + std::string(12, '#') + "\n";
}

/// Interior mask rows: ceiling band, wall band with a window, floor band.
inline std::string interior_ascii(int w, int h, int window_w, int void_rows) {
  std::string out;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      char c;
      if (y < void_rows) {
        c = ' ';
      } else if (y < h / 4) {
        c = 'c';
      } else if (y < (3 * h) / 4) {
        c = (x >= 2 && x < 2 + window_w && y < h / 2) ? 'n' : (x == w - 1 ? 'o' : 'w');
      } else {
        c = 'f';
      }
      out.push_back(c);
    }
    out.push_back('\n');
  }
  return out;
}

inline std::size_t open_pixels(const std::string& ascii_plan) {
  return static_cast<std::size_t>(std::count(ascii_plan.begin(), ascii_plan.end(), '.') +
                                  std::count(ascii_plan.begin(), ascii_plan.end(), 'D'));
}

inline std::string area_for(const std::string& ascii_plan) {
  return std::to_string(static_cast<double>(open_pixels(ascii_plan)) * kFixtureMetersPerPixel *
                        kFixtureMetersPerPixel);
}

/// Writes the fixture under `root` and returns the config path. When
/// `broken_third` is set the third dwelling's plan is solid wall.
inline std::filesystem::path write_three_property_fixture(const std::filesystem::path& root,
                                                          bool broken_third = false) {
  namespace fs = std::filesystem;
  fs::create_directories(root / "plans");
  fs::create_directories(root / "interiors");

  // p001: indexed PNG
  const auto plan_a = boxed_plan(40, 30);
  {
    const auto mask = parse_ascii_mask(plan_a, MaskFlavor::FloorPlan);
    GrayImage img{mask.width(), mask.height(), {mask.labels().begin(), mask.labels().end()}};
    write_bytes(root / "plans" / "p001.png", encode_png_indexed(img));
  }
  // p002: ASCII fixture grammar
  const auto plan_b = two_room_plan();
  csv::write_text_file(root / "plans" / "p002.txt", plan_b);
  // p003: binary PGM
  const auto plan_c = broken_third ? all_wall_plan() : l_shaped_plan();
  {
    const auto mask = parse_ascii_mask(plan_c, MaskFlavor::FloorPlan);
    std::string pgm = "P5\n" + std::to_string(mask.width()) + " " + std::to_string(mask.height()) + "\n255\n";
    pgm.append(mask.labels().begin(), mask.labels().end());
    csv::write_text_file(root / "plans" / "p003.pgm", pgm);
  }

  csv::write_text_file(root / "interiors" / "p001_living.txt", interior_ascii(24, 16, 6, 0));
  csv::write_text_file(root / "interiors" / "p002_living.txt", interior_ascii(20, 20, 3, 2));
  csv::write_text_file(root / "interiors" / "p003_a.txt", interior_ascii(16, 12, 8, 0));
  csv::write_text_file(root / "interiors" / "p003_b.txt", interior_ascii(16, 12, 2, 1));

  const std::string area_c = broken_third ? "12.5" : area_for(plan_c);
  csv::write_text_file(
      root / "metadata.csv",
      "property_id,rent,floor_area_m2,construction_year,region_key,latitude,longitude,floorplan_mask,interior_masks\n"
      "p001,98000," + area_for(plan_a) + ",1975,Shibuya,35.6620,139.7038,p001.png,p001_living.txt\n"
      "p002,121000," + area_for(plan_b) + ",1992,Chiyoda,35.6940,139.7536,p002.txt,p002_living.txt\n"
      "p003,87000," + area_c + ",2008,Setagaya,,,p003.pgm,p003_a.txt;p003_b.txt\n"
      "p004,60000,20.0,1955,Nerima,,,p001.png,p001_living.txt\n");

  csv::write_text_file(root / "run.cfg",
                       "# synthetic three-dwelling run\n"
                       "metadata = metadata.csv\n"
                       "floorplan_dir = plans\n"
                       "interior_dir = interiors\n"
                       "grid_interval_m = 0.20\n"
                       "min_year = 1960\n"
                       "regions = Shibuya, Chiyoda, Setagaya, Nerima\n"
                       "out_dir = out\n"
                       "workers = 1\n"
                       "correlation_columns = mean_visibility, mean_relative, wall_ratio, window_ratio, rent, "
                       "latitude\n");
  return root / "run.cfg";
}

}  // namespace openness::testkit
