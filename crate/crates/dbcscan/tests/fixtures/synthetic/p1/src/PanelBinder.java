package com.fixture.p1;

import androidx.annotation.ColorInt;
import androidx.annotation.NonNull;
import androidx.annotation.Nullable;

public class PanelBinder {

  @ColorInt
  private int accentPanel;

  public void bindPanel(@NonNull String tag, @Size(min = 1) int[] slots) {
  }

  @Nullable
  public String titlePanel() {
    return null;
  }
}
