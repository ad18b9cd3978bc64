#pragma once

#include <functional>
#include <string>

#include "glyphrec/binarize.hpp"
#include "glyphrec/contour.hpp"
#include "glyphrec/features.hpp"
#include "glyphrec/image.hpp"
#include "glyphrec/morphology.hpp"
#include "glyphrec/thinning.hpp"

namespace glyphrec {

/// Optional observer for intermediate pipeline stages (debug dumps).
using StageDump = std::function<void(const std::string& stage, const BinaryImage&)>;

/// Canonical representations shared by the feature extractors.
struct PipelineStages {
    BinaryImage binarized;
    Rect box;
    BinaryImage canvas;  ///< scaled to 100x100 and smoothed
    Skeleton skeleton;
    BinaryImage contour;
    std::vector<ContourChain> chains;
};

inline PipelineStages run_pipeline(const GrayImage& img, const StageDump* dump = nullptr) {
    PipelineStages st;
    st.binarized = binarize_dynamic_threshold(img).image;
    if (dump) (*dump)("binarized", st.binarized);
    st.box = tight_bounding_box(st.binarized);
    st.canvas = morph_cleanup(scale_to_canvas(st.binarized, st.box));
    if (dump) (*dump)("canvas", st.canvas);
    st.skeleton = thin_to_skeleton(st.canvas);
    if (dump) (*dump)("skeleton", st.skeleton.image);
    st.contour = extract_contour_mask(st.canvas);
    if (dump) (*dump)("contour", st.contour);
    st.chains = trace_chain_codes(st.contour);
    return st;
}

/// Runs the full preprocessing pipeline and computes all four feature
/// vectors. Deterministic for identical input bytes.
inline FeatureBundle extract_feature_bundle(const GrayImage& img, const StageDump* dump = nullptr) {
    const PipelineStages st = run_pipeline(img, dump);
    FeatureBundle bundle;
    bundle[static_cast<std::size_t>(Family::Shadow)] = shadow_features(st.canvas);
    bundle[static_cast<std::size_t>(Family::Intersection)] =
        intersection_features(st.skeleton, SegmentGrid::skeleton4x4());
    bundle[static_cast<std::size_t>(Family::LineFit)] =
        line_fitting_features(st.skeleton, SegmentGrid::skeleton4x4());
    bundle[static_cast<std::size_t>(Family::ChainCode)] =
        chain_code_histogram(st.chains, SegmentGrid::contour5x5());
    return bundle;
}

}  // namespace glyphrec
