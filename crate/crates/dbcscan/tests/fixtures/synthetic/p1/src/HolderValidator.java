package com.fixture.p1;

import java.util.List;

public class HolderValidator {

  public void validateHolder(List<String> entries, int limit) {
    if (entries.isEmpty()) {
      throw new IllegalArgumentException("no entries");
    }
    if (limit < 7) throw new IllegalStateException();
  }

  public void rethrowHolder() {
    throw new NullPointerException();
  }

  public void loopHolder(int count) {
    if (count > 0) {
      for (int k = 0; k < count; k++) {
        throw new IllegalArgumentException("deep");
      }
    }
  }
}
