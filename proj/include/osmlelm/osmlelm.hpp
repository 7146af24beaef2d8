#pragma once

#include "osmlelm/dataset.hpp"
#include "osmlelm/error.hpp"
#include "osmlelm/hidden_layer.hpp"
#include "osmlelm/labels.hpp"
#include "osmlelm/matrix.hpp"
#include "osmlelm/metrics.hpp"
#include "osmlelm/model.hpp"
#include "osmlelm/model_io.hpp"
#include "osmlelm/numerics.hpp"
#include "osmlelm/runner.hpp"
