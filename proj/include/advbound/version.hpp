#pragma once

#define ADVBOUND_VERSION "1.0.0"
