#pragma once

#include <catprob/channel.hpp>
#include <catprob/data_table.hpp>
#include <catprob/disintegration.hpp>
#include <catprob/effects.hpp>
#include <catprob/error.hpp>
#include <catprob/independence.hpp>
#include <catprob/likelihood.hpp>
#include <catprob/naive_bayes.hpp>
#include <catprob/space.hpp>
