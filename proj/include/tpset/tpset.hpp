#pragma once

#include "tpset/bitops.hpp"
#include "tpset/corpus.hpp"
#include "tpset/lce_index.hpp"
#include "tpset/lce_provider.hpp"
#include "tpset/oracle.hpp"
#include "tpset/partition.hpp"
#include "tpset/refine.hpp"
#include "tpset/rmq.hpp"
#include "tpset/sparse_tree.hpp"
#include "tpset/sparsify.hpp"
#include "tpset/sst_user.hpp"
#include "tpset/suffix_array.hpp"
#include "tpset/text.hpp"
