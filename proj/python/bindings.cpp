#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "openness/analytics.hpp"
#include "openness/config.hpp"
#include "openness/error.hpp"
#include "openness/grid.hpp"
#include "openness/interior.hpp"
#include "openness/mask.hpp"
#include "openness/pipeline.hpp"
#include "openness/stats.hpp"
#include "openness/vga.hpp"

namespace py = pybind11;
using namespace openness;

namespace {

MaskFlavor flavor_from(const std::string& name) {
  if (name == "floorplan") return MaskFlavor::FloorPlan;
  if (name == "interior") return MaskFlavor::Interior;
  throw ConfigError("flavor must be 'floorplan' or 'interior', got '" + name + "'");
}

Vocabulary vocabulary_for(MaskFlavor flavor, const std::optional<std::filesystem::path>& class_map) {
  return class_map ? load_vocabulary(*class_map) : default_vocabulary(flavor);
}

py::array_t<std::uint32_t> counts_array(const VisibilityField& field) {
  py::array_t<std::uint32_t> out(static_cast<py::ssize_t>(field.node_count()));
  std::copy(field.counts().begin(), field.counts().end(), out.mutable_data());
  return out;
}

py::array_t<std::uint8_t> image_array(const GrayImage& img) {
  py::array_t<std::uint8_t> out({img.height, img.width});
  std::copy(img.pixels.begin(), img.pixels.end(), out.mutable_data());
  return out;
}

py::dict summary_dict(const Openness2DSummary& s) {
  py::dict d;
  d["mean_visibility"] = s.mean_visibility;
  d["std_visibility"] = s.std_visibility;
  d["min_visibility"] = s.min_visibility;
  d["max_visibility"] = s.max_visibility;
  d["median_visibility"] = s.median_visibility;
  d["mean_relative"] = s.mean_relative ? py::cast(*s.mean_relative) : py::none();
  d["node_count"] = s.node_count;
  return d;
}

py::dict ratios_dict(const ElementRatios& r) {
  py::dict d;
  d["wall"] = r.wall;
  d["ceiling"] = r.ceiling;
  d["floor"] = r.floor;
  d["window"] = r.window;
  d["other"] = r.other;
  d["denominator"] = r.denominator;
  return d;
}

std::vector<double> to_vector(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  return {a.data(), a.data() + a.size()};
}

py::dict correlation_dict(const stats::Correlation& c) {
  py::dict d;
  d["r"] = c.r;
  d["p_value"] = c.p_value;
  d["n"] = c.n;
  return d;
}

RunConfig config_with(const std::filesystem::path& path, const std::optional<std::string>& out_dir,
                      std::optional<unsigned> workers) {
  auto config = load_config(path);
  if (out_dir) config.out_dir = std::filesystem::absolute(*out_dir).string();
  if (workers) config.workers = *workers;
  validate_config(config);
  return config;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Spatial openness indicators for floor plans and interior images";

  auto base = py::register_exception<Error>(m, "OpennessError", PyExc_RuntimeError);
  py::register_exception<IoError>(m, "InputError", base.ptr());
  py::register_exception<FormatError>(m, "FormatError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

  m.attr("DEFAULT_GRID_INTERVAL_M") = kDefaultGridIntervalM;

  py::class_<OccupancyGrid>(m, "OccupancyGrid")
      .def_property_readonly("cols", &OccupancyGrid::cols)
      .def_property_readonly("rows", &OccupancyGrid::rows)
      .def_property_readonly("cell_size_m", &OccupancyGrid::cell_size_m)
      .def_property_readonly("node_count", &OccupancyGrid::node_count)
      .def("nodes",
           [](const OccupancyGrid& g) {
             std::vector<std::pair<int, int>> out;
             for (const auto c : g.nodes()) out.emplace_back(c.x, c.y);
             return out;
           },
           "Node cells as (x, y) in row-major order; the list index is the node ordinal.")
      .def("to_ascii", [](const OccupancyGrid& g) { return to_ascii(g); })
      .def("__eq__", [](const OccupancyGrid& a, const OccupancyGrid& b) { return a == b; })
      .def("__repr__", [](const OccupancyGrid& g) {
        return "<OccupancyGrid " + std::to_string(g.cols()) + "x" + std::to_string(g.rows()) + ", " +
               std::to_string(g.node_count()) + " nodes>";
      });

  m.def("grid_from_ascii", &grid_from_ascii, py::arg("text"), py::arg("cell_size_m") = kDefaultGridIntervalM,
        "Grid from '#' blocked, '.' node, ' ' outside rows.");

  m.def(
      "floorplan_grid",
      [](const std::filesystem::path& mask, double area_m2, double interval_m,
         const std::optional<std::filesystem::path>& class_map) {
        const auto vocab = vocabulary_for(MaskFlavor::FloorPlan, class_map);
        const auto occ = binarize_floorplan(parse_class_mask(mask, vocab, MaskFlavor::FloorPlan));
        const auto cal = calibrate(occ, area_m2);
        return py::make_tuple(build_grid(occ, cal, interval_m), cal.meters_per_pixel);
      },
      py::arg("mask"), py::arg("area_m2"), py::arg("interval_m") = kDefaultGridIntervalM,
      py::arg("class_map") = py::none(), "Decode a floor-plan mask; returns (grid, meters_per_pixel).");

  m.def(
      "line_of_sight",
      [](const OccupancyGrid& g, std::pair<int, int> p, std::pair<int, int> q) {
        return line_of_sight(g, {p.first, p.second}, {q.first, q.second});
      },
      py::arg("grid"), py::arg("p"), py::arg("q"));

  m.def(
      "visibility_counts",
      [](const OccupancyGrid& g, unsigned workers) {
        py::gil_scoped_release release;
        auto field = visibility_counts(g, workers);
        py::gil_scoped_acquire acquire;
        return counts_array(field);
      },
      py::arg("grid"), py::arg("workers") = 1u, "Per-node visibility counts in node-ordinal order.");

  m.def(
      "summarize",
      [](const OccupancyGrid& g, unsigned workers) { return summary_dict(summarize(visibility_counts(g, workers))); },
      py::arg("grid"), py::arg("workers") = 1u);

  m.def(
      "heatmap",
      [](const OccupancyGrid& g, unsigned workers) { return image_array(render_heatmap(visibility_counts(g, workers))); },
      py::arg("grid"), py::arg("workers") = 1u, "One 8-bit pixel per cell.");

  m.def(
      "element_ratios",
      [](const std::filesystem::path& mask, const std::optional<std::filesystem::path>& class_map) {
        return ratios_dict(element_ratios(parse_class_mask(mask, vocabulary_for(MaskFlavor::Interior, class_map),
                                                           MaskFlavor::Interior)));
      },
      py::arg("mask"), py::arg("class_map") = py::none());

  m.def(
      "element_ratios_from_ascii",
      [](const std::string& text) { return ratios_dict(element_ratios(parse_ascii_mask(text, MaskFlavor::Interior))); },
      py::arg("text"));

  m.def(
      "mask_labels",
      [](const std::filesystem::path& mask, const std::string& flavor,
         const std::optional<std::filesystem::path>& class_map) {
        const auto f = flavor_from(flavor);
        const auto parsed = parse_class_mask(mask, vocabulary_for(f, class_map), f);
        py::array_t<std::uint8_t> out({parsed.height(), parsed.width()});
        std::copy(parsed.labels().begin(), parsed.labels().end(), out.mutable_data());
        return out;
      },
      py::arg("mask"), py::arg("flavor") = "floorplan", py::arg("class_map") = py::none());

  m.def(
      "pearson", [](const py::array_t<double, py::array::c_style | py::array::forcecast>& x,
                    const py::array_t<double, py::array::c_style | py::array::forcecast>& y) {
        return correlation_dict(stats::pearson(to_vector(x), to_vector(y)));
      },
      py::arg("x"), py::arg("y"));
  m.def(
      "spearman", [](const py::array_t<double, py::array::c_style | py::array::forcecast>& x,
                     const py::array_t<double, py::array::c_style | py::array::forcecast>& y) {
        return correlation_dict(stats::spearman(to_vector(x), to_vector(y)));
      },
      py::arg("x"), py::arg("y"));
  m.def(
      "ols_trend",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& years,
         const py::array_t<double, py::array::c_style | py::array::forcecast>& values) {
        const auto fit = stats::ols_trend(to_vector(years), to_vector(values));
        py::dict d;
        d["slope"] = fit.slope;
        d["intercept"] = fit.intercept;
        d["p_value"] = fit.p_value;
        d["n"] = fit.n;
        return d;
      },
      py::arg("years"), py::arg("values"));
  m.def("stars", &stats::stars, py::arg("p_value"));

  m.def(
      "run_compute",
      [](const std::filesystem::path& config, const std::optional<std::string>& out_dir,
         std::optional<unsigned> workers) {
        const auto cfg = config_with(config, out_dir, workers);
        ComputeSummary s;
        {
          py::gil_scoped_release release;
          s = run_compute(cfg);
        }
        py::dict d;
        d["records"] = s.funnel.original;
        d["after_funnel"] = s.funnel.final_count();
        d["computed"] = s.computed;
        d["failed"] = s.failed;
        d["out_dir"] = s.out_dir;
        return d;
      },
      py::arg("config"), py::arg("out_dir") = py::none(), py::arg("workers") = py::none(),
      "Run the batch computation described by a config file.");

  m.def(
      "run_analytics",
      [](const std::filesystem::path& config, const std::optional<std::string>& out_dir,
         const std::optional<std::filesystem::path>& metrics) {
        const auto cfg = config_with(config, out_dir, std::nullopt);
        const auto path = metrics ? *metrics : cfg.resolve(cfg.out_dir) / "metrics.csv";
        return run_analytics(cfg, path).written;
      },
      py::arg("config"), py::arg("out_dir") = py::none(), py::arg("metrics") = py::none());
}
