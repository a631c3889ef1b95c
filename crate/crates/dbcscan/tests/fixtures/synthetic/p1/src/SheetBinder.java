package com.fixture.p1;

import androidx.annotation.ColorInt;
import androidx.annotation.NonNull;
import androidx.annotation.Nullable;

public class SheetBinder {

  @ColorInt
  private int accentSheet;

  public void bindSheet(@NonNull String tag, @Size(min = 5) int[] slots) {
  }

  @Nullable
  public String titleSheet() {
    return null;
  }
}
