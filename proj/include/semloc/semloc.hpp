// SPDX-License-Identifier: Apache-2.0
// Umbrella header.
#pragma once

#include "semloc/common.hpp"

#include "semloc/cloud/kdtree.hpp"
#include "semloc/cloud/normals.hpp"
#include "semloc/cloud/pcd_io.hpp"
#include "semloc/cloud/point_cloud.hpp"

#include "semloc/keypoints/harris3d.hpp"
#include "semloc/keypoints/keypoint_set.hpp"
#include "semloc/keypoints/uniform_sampling.hpp"

#include "semloc/features/esf.hpp"
#include "semloc/features/feature_io.hpp"
#include "semloc/features/fpfh.hpp"
#include "semloc/features/pfh.hpp"
#include "semloc/features/shot.hpp"

#include "semloc/bow/bow_descriptor.hpp"
#include "semloc/bow/dictionary.hpp"
#include "semloc/bow/dictionary_io.hpp"

#include "semloc/classify/evaluation.hpp"
#include "semloc/classify/kernel.hpp"
#include "semloc/classify/knn.hpp"
#include "semloc/classify/model_io.hpp"
#include "semloc/classify/svm.hpp"

#include "semloc/pipeline/config.hpp"
#include "semloc/pipeline/report.hpp"
#include "semloc/pipeline/synthetic.hpp"
#include "semloc/pipeline/system.hpp"

#include "semloc/cli/commands.hpp"
